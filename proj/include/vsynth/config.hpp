#pragma once

#include "json.hpp"
#include "vsynth/augment.hpp"
#include "vsynth/denoise.hpp"
#include "vsynth/growth.hpp"
#include "vsynth/noise.hpp"

namespace vsynth {

// JSON mapping of the parameter bundles. from_json only overwrites keys that
// are present, so a partial document layers over defaults.
void to_json(nlohmann::json& j, const GrowthParams& p);
void from_json(const nlohmann::json& j, GrowthParams& p);
void to_json(nlohmann::json& j, const NoiseParams& p);
void from_json(const nlohmann::json& j, NoiseParams& p);
void to_json(nlohmann::json& j, const AugmentParams& p);
void from_json(const nlohmann::json& j, AugmentParams& p);
void to_json(nlohmann::json& j, const DenoiseParams& p);
void from_json(const nlohmann::json& j, DenoiseParams& p);

nlohmann::json vec3_to_json(const Vec3& v);
Vec3 vec3_from_json(const nlohmann::json& j);

/// Parse a JSON document from disk; ParseError / Io on failure.
nlohmann::json load_json(const std::filesystem::path& path);

}  // namespace vsynth
