#pragma once

#include "vsynth/grid.hpp"
#include "vsynth/tree.hpp"

namespace vsynth {

/// Typical lumen contrast band, [lo, hi).
inline constexpr double kContrastLowHu = 95.0;
inline constexpr double kContrastHighHu = 450.0;

/// Voxelize every live node as a closed ball (center = position, radius =
/// beta * |direction|). A voxel is set when at least half of its
/// supersample^3 sub-samples fall inside the union of balls; supersample = 1
/// tests the voxel center only.
Mask rasterize_tree(const Tree& tree, const GridGeometry& grid, int supersample = 2);

/// Soft occupancy: mask smoothed by a Gaussian of `sigma_mm` (per-axis in voxels
/// = sigma_mm / spacing), zero outside the grid, clipped to [0,1].
Grid<double> soft_occupancy(const Mask& mask, double sigma_mm);

/// background * (1 - occ) + contrast_hu * occ. Contrast outside [95, 450) only warns.
Volume blend_vessels(const Volume& background, const Mask& mask, double contrast_hu,
                     double edge_sigma_mm);

}  // namespace vsynth
