#pragma once

#include <optional>
#include <span>
#include <utility>

#include "vsynth/grid.hpp"

namespace vsynth {

/// Vessel-presence density in [0,1]; guides and spatially bounds tree growth.
class Atlas : public Grid<float> {
 public:
  Atlas() = default;
  explicit Atlas(GridGeometry geometry, float fill = 0.0f) : Grid<float>(std::move(geometry), fill) {}
  explicit Atlas(Grid<float> density) : Grid<float>(std::move(density)) {}

  /// True when the voxel containing `p` has a positive value. Off-grid is never in support.
  bool in_support(const Vec3& p) const;
};

/// Voxelwise mean of binary masks. All masks must share dims and spacing.
Atlas build_atlas(std::span<const Mask> masks);

/// value <- 1 if value >= threshold else 0.
Atlas binarize(const Atlas& atlas, double threshold);

/// Center (mm) of the maximum-valued voxel whose center lies within `search_radius`
/// of `position`. Ties go to the nearer voxel, then to the smaller (x, y, z) index.
/// Nothing when every value in range is zero.
std::optional<Vec3> sample_target(const Atlas& atlas, const Vec3& position, double search_radius);

/// Lower every voxel within radius_factor * node_radius by `amount`, clamped at 0.
void decrement_neighborhood(Atlas& atlas, const Vec3& position, double node_radius, double amount,
                            double radius_factor);

/// (left, right): left keeps x-index < midsagittal_x, right keeps the rest.
std::pair<Atlas, Atlas> split_hemispheres(const Atlas& atlas, int midsagittal_x);

}  // namespace vsynth
