#include "vsynth/atlas.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace vsynth {

bool Atlas::in_support(const Vec3& p) const {
  const auto v = geometry().voxel_of(p);
  return v && (*this)(v->x(), v->y(), v->z()) > 0.0f;
}

Atlas build_atlas(std::span<const Mask> masks) {
  if (masks.empty()) throw Error(Errc::InvalidParams, "build_atlas needs at least one mask");
  const GridGeometry& g = masks.front().geometry();
  validate_geometry(g);
  std::vector<std::uint32_t> counts(g.voxel_count(), 0);
  for (const Mask& m : masks) {
    if (!m.geometry().same_shape(g)) throw Error(Errc::ShapeMismatch, "atlas masks differ in shape");
    for (std::size_t n = 0; n < counts.size(); ++n) counts[n] += m[n] != 0 ? 1u : 0u;
  }
  Atlas atlas(g);
  const double total = static_cast<double>(masks.size());
  for (std::size_t n = 0; n < counts.size(); ++n)
    atlas[n] = static_cast<float>(static_cast<double>(counts[n]) / total);
  return atlas;
}

Atlas binarize(const Atlas& atlas, double threshold) {
  if (!(threshold >= 0.0 && threshold <= 1.0))
    throw Error(Errc::InvalidParams, "binarize threshold must lie in [0,1]");
  Atlas out(atlas.geometry());
  for (std::size_t n = 0; n < atlas.size(); ++n)
    out[n] = static_cast<double>(atlas[n]) >= threshold ? 1.0f : 0.0f;
  return out;
}

std::optional<Vec3> sample_target(const Atlas& atlas, const Vec3& position, double search_radius) {
  if (!(search_radius > 0.0)) throw Error(Errc::InvalidParams, "search radius must be positive");
  const GridGeometry& g = atlas.geometry();
  float best = 0.0f;
  double best_d2 = std::numeric_limits<double>::infinity();
  Index3 best_idx(0, 0, 0);
  bool found = false;
  for_each_voxel_in_ball(g, position, search_radius, [&](int i, int j, int k, double d2) {
    const float v = atlas(i, j, k);
    if (v <= 0.0f) return;
    bool better = false;
    if (!found || v > best) {
      better = true;
    } else if (v == best) {
      if (d2 < best_d2) {
        better = true;
      } else if (d2 == best_d2) {
        better = std::tie(i, j, k) < std::tie(best_idx.x(), best_idx.y(), best_idx.z());
      }
    }
    if (better) {
      found = true;
      best = v;
      best_d2 = d2;
      best_idx = Index3(i, j, k);
    }
  });
  if (!found) return std::nullopt;
  return g.voxel_center(best_idx.x(), best_idx.y(), best_idx.z());
}

void decrement_neighborhood(Atlas& atlas, const Vec3& position, double node_radius, double amount,
                            double radius_factor) {
  if (!(amount >= 0.0)) throw Error(Errc::InvalidParams, "decrement amount must be >= 0");
  if (!(radius_factor > 0.0)) throw Error(Errc::InvalidParams, "radius factor must be > 0");
  if (amount == 0.0) return;
  for_each_voxel_in_ball(atlas.geometry(), position, radius_factor * node_radius,
                         [&](int i, int j, int k, double) {
                           float& v = atlas(i, j, k);
                           v = static_cast<float>(std::max(0.0, static_cast<double>(v) - amount));
                         });
}

std::pair<Atlas, Atlas> split_hemispheres(const Atlas& atlas, int midsagittal_x) {
  const Index3& d = atlas.dims();
  if (midsagittal_x < 0 || midsagittal_x >= d.x())
    throw Error(Errc::IndexOutOfRange,
                "midsagittal index " + std::to_string(midsagittal_x) + " outside [0, nx)");
  Atlas left = atlas;
  Atlas right = atlas;
  for (int k = 0; k < d.z(); ++k)
    for (int j = 0; j < d.y(); ++j)
      for (int i = 0; i < d.x(); ++i) (i >= midsagittal_x ? left : right)(i, j, k) = 0.0f;
  return {std::move(left), std::move(right)};
}

}  // namespace vsynth
