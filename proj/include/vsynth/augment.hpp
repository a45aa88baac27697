#pragma once

#include <Eigen/Geometry>
#include <array>
#include <cstdint>
#include <utility>

#include "vsynth/grid.hpp"
#include "vsynth/rng.hpp"

namespace vsynth {

using Range = std::array<double, 2>;

struct AugmentParams {
  /// Rotation ranges in degrees: axial (about z), coronal (about y), sagittal (about x).
  Range rot_axial{-20.0, 20.0};
  Range rot_coronal{-10.0, 10.0};
  Range rot_sagittal{-10.0, 10.0};
  /// Translations as fractions of the grid extent along each axis.
  Range trans_z_frac{-0.03, 0.03};
  Range trans_xy_frac{-0.05, 0.05};
  double mirror_sagittal_prob = 0.5;
  std::uint64_t seed = 0;
  double fill_hu = -1000.0;

  void validate() const;
};

/// One draw of the rigid augmentation parameters.
struct RigidSample {
  double axial_deg = 0.0;
  double coronal_deg = 0.0;
  double sagittal_deg = 0.0;
  /// (x, y, z) translation as fractions of the grid extent.
  Vec3 translation_frac = Vec3::Zero();
  bool mirror = false;
};

RigidSample sample_rigid(const AugmentParams& params, Rng& rng);

/// Forward map in mm: y = R * M * (x - c) + c + t, with c the grid center,
/// M the optional x flip and R = R_sagittal * R_coronal * R_axial.
Eigen::Affine3d rigid_transform(const RigidSample& sample, const GridGeometry& grid);

/// Pull-resample through the inverse of `forward`; samples outside the voxel-center
/// lattice take `fill`.
Volume resample_trilinear(const Volume& volume, const Eigen::Affine3d& forward, float fill);
Mask resample_nearest(const Mask& mask, const Eigen::Affine3d& forward, std::uint8_t fill = 0);

std::pair<Volume, Mask> apply_rigid(const Volume& volume, const Mask& mask, const RigidSample& sample,
                                    float fill_hu);

/// Sample one rigid transform and apply it to both inputs.
std::pair<Volume, Mask> random_rigid(const Volume& volume, const Mask& mask,
                                     const AugmentParams& params, Rng& rng);

}  // namespace vsynth
