#include "vsynth/config.hpp"

#include <fstream>

namespace vsynth {

using nlohmann::json;

namespace {

template <typename T>
void read_if(const json& j, const char* key, T& field) {
  if (j.contains(key)) field = j.at(key).get<T>();
}

}  // namespace

void to_json(json& j, const GrowthParams& p) {
  j = json{{"sigma_angle", p.sigma_angle},
           {"beta0", p.beta0},
           {"gamma", p.gamma},
           {"r_min", p.r_min},
           {"bifurcation_prob", p.bifurcation_prob},
           {"min_bifurcation_spacing", p.min_bifurcation_spacing},
           {"lambda_pull", p.lambda_pull},
           {"radius_sigma_fraction", p.radius_sigma_fraction},
           {"max_nodes", p.max_nodes},
           {"seed", p.seed},
           {"target_search_factor", p.target_search_factor},
           {"decrement_amount", p.decrement_amount},
           {"decrement_radius_factor", p.decrement_radius_factor}};
}

void from_json(const json& j, GrowthParams& p) {
  read_if(j, "sigma_angle", p.sigma_angle);
  read_if(j, "beta0", p.beta0);
  read_if(j, "gamma", p.gamma);
  read_if(j, "r_min", p.r_min);
  read_if(j, "bifurcation_prob", p.bifurcation_prob);
  read_if(j, "min_bifurcation_spacing", p.min_bifurcation_spacing);
  read_if(j, "lambda_pull", p.lambda_pull);
  read_if(j, "radius_sigma_fraction", p.radius_sigma_fraction);
  read_if(j, "max_nodes", p.max_nodes);
  read_if(j, "seed", p.seed);
  read_if(j, "target_search_factor", p.target_search_factor);
  read_if(j, "decrement_amount", p.decrement_amount);
  read_if(j, "decrement_radius_factor", p.decrement_radius_factor);
}

void to_json(json& j, const NoiseParams& p) {
  j = json{{"octaves", p.octaves},         {"base_frequency", p.base_frequency},
           {"persistence", p.persistence}, {"lacunarity", p.lacunarity},
           {"amplitude_hu", p.amplitude_hu}, {"seed", p.seed}};
}

void from_json(const json& j, NoiseParams& p) {
  read_if(j, "octaves", p.octaves);
  read_if(j, "base_frequency", p.base_frequency);
  read_if(j, "persistence", p.persistence);
  read_if(j, "lacunarity", p.lacunarity);
  read_if(j, "amplitude_hu", p.amplitude_hu);
  read_if(j, "seed", p.seed);
}

void to_json(json& j, const AugmentParams& p) {
  j = json{{"rot_axial", p.rot_axial},
           {"rot_coronal", p.rot_coronal},
           {"rot_sagittal", p.rot_sagittal},
           {"trans_z_frac", p.trans_z_frac},
           {"trans_xy_frac", p.trans_xy_frac},
           {"mirror_sagittal_prob", p.mirror_sagittal_prob},
           {"seed", p.seed},
           {"fill_hu", p.fill_hu}};
}

void from_json(const json& j, AugmentParams& p) {
  read_if(j, "rot_axial", p.rot_axial);
  read_if(j, "rot_coronal", p.rot_coronal);
  read_if(j, "rot_sagittal", p.rot_sagittal);
  read_if(j, "trans_z_frac", p.trans_z_frac);
  read_if(j, "trans_xy_frac", p.trans_xy_frac);
  read_if(j, "mirror_sagittal_prob", p.mirror_sagittal_prob);
  read_if(j, "seed", p.seed);
  read_if(j, "fill_hu", p.fill_hu);
}

void to_json(json& j, const DenoiseParams& p) {
  j = json{{"h", p.h}, {"patch_radius", p.patch_radius}};
}

void from_json(const json& j, DenoiseParams& p) {
  read_if(j, "h", p.h);
  read_if(j, "patch_radius", p.patch_radius);
}

json vec3_to_json(const Vec3& v) { return json::array({v.x(), v.y(), v.z()}); }

Vec3 vec3_from_json(const json& j) {
  if (!j.is_array() || j.size() != 3) throw Error(Errc::ParseError, "expected a 3-vector");
  return Vec3(j[0].get<double>(), j[1].get<double>(), j[2].get<double>());
}

json load_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::Io, "cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw Error(Errc::ParseError, path.string() + ": " + e.what());
  }
}

}  // namespace vsynth
