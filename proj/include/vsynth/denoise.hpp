#pragma once

#include <span>

#include "vsynth/grid.hpp"

namespace vsynth {

struct DenoiseParams {
  /// Intensity-similarity bandwidth (HU).
  double h = 30.0;
  /// Patch half-width in voxels; 0 compares single voxels.
  int patch_radius = 1;

  void validate() const;
};

/// Non-local means across time: each output voxel is a weighted mean of the
/// same voxel over all frames, weighted by exp(-D_t^2 / h^2) where D_t is the
/// RMS difference between the patch around the voxel in frame t and in frame 0.
/// Patches are truncated at the grid boundary.
Volume temporal_nlm(std::span<const Volume> frames, const DenoiseParams& params);

}  // namespace vsynth
