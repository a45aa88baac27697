#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"
#include "vsynth/dataset.hpp"

namespace vsynth {

struct ManifestEntry {
  int index = 0;
  std::uint64_t seed = 0;
  std::string volume;
  std::string mask;
};

/// Generate `count` examples from `base` with seeds seed + index, writing
/// example_NNNN_volume.vvol / example_NNNN_mask.vvol and manifest.json into
/// `out_dir`. `jobs` workers share the work; output bytes do not depend on it.
/// `spec_json` is embedded per example in the manifest.
std::vector<ManifestEntry> generate_dataset(const ExampleSpec& base, int count, std::uint64_t seed,
                                            const std::filesystem::path& out_dir, int jobs,
                                            const nlohmann::json& spec_json);

/// JSON description of an ExampleSpec (everything except the voxel data).
nlohmann::json example_spec_json(const ExampleSpec& spec);

}  // namespace vsynth
