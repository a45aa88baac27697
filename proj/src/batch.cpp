#include "vsynth/batch.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <exception>
#include <fstream>
#include <mutex>
#include <thread>

#include "vsynth/config.hpp"
#include "vsynth/container.hpp"

namespace vsynth {

using nlohmann::json;

json example_spec_json(const ExampleSpec& spec) {
  json j;
  j["atlas_threshold"] = spec.atlas_threshold;
  j["midsagittal_x"] = spec.midsagittal_x;
  j["roots"] = json::array();
  for (std::size_t h = 0; h < 2; ++h)
    j["roots"].push_back({{"position", vec3_to_json(spec.root_positions[h])},
                          {"direction", vec3_to_json(spec.root_directions[h])}});
  j["growth"] = json::array({spec.growth[0], spec.growth[1]});
  j["noise"] = spec.noise;
  j["blend"] = {{"contrast_hu", spec.contrast_hu}, {"edge_sigma_mm", spec.edge_sigma_mm}};
  j["supersample"] = spec.supersample;
  j["augment"] = spec.augment ? json(*spec.augment) : json(nullptr);
  return j;
}

std::vector<ManifestEntry> generate_dataset(const ExampleSpec& base, int count, std::uint64_t seed,
                                            const std::filesystem::path& out_dir, int jobs,
                                            const json& spec_json) {
  if (count < 0) throw Error(Errc::InvalidParams, "count must be >= 0");
  std::filesystem::create_directories(out_dir);
  std::vector<ManifestEntry> entries(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    char stem[32];
    std::snprintf(stem, sizeof stem, "example_%04d", i);
    entries[i] = {i, seed + static_cast<std::uint64_t>(i), std::string(stem) + "_volume.vvol",
                  std::string(stem) + "_mask.vvol"};
  }

  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (int i = next++; i < count; i = next++) {
      try {
        ExampleSpec spec = base;
        spec.seed = entries[i].seed;
        const TrainingExample ex = make_training_example(spec);
        write_volume(out_dir / entries[i].volume, ex.volume);
        write_mask(out_dir / entries[i].mask, ex.mask);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = count;
      }
    }
  };
  const int workers = std::max(1, std::min(jobs, std::max(count, 1)));
  std::vector<std::thread> pool;
  for (int w = 1; w < workers; ++w) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);

  json manifest;
  manifest["format"] = "vasculsynth-dataset";
  manifest["version"] = 1;
  manifest["seed"] = seed;
  manifest["examples"] = json::array();
  for (const ManifestEntry& e : entries)
    manifest["examples"].push_back(
        {{"index", e.index}, {"seed", e.seed}, {"volume", e.volume}, {"mask", e.mask}, {"spec", spec_json}});
  std::ofstream out(out_dir / "manifest.json", std::ios::binary);
  if (!out) throw Error(Errc::Io, "cannot write manifest in " + out_dir.string());
  out << manifest.dump(2) << '\n';
  return entries;
}

}  // namespace vsynth
