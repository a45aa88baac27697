#pragma once

#include <cstdint>

#include "vsynth/grid.hpp"

namespace vsynth {

struct NoiseParams {
  int octaves = 2;
  /// Lattice cells per millimeter for the first octave.
  double base_frequency = 0.2;
  double persistence = 0.5;
  double lacunarity = 2.0;
  double amplitude_hu = 15.0;
  std::uint64_t seed = 0;

  void validate() const;
};

/// Gradient noise at `p` (lattice units), in [-1, 1]; zero on every integer lattice point.
double perlin3(const Vec3& p, std::uint64_t seed);

/// Persistence-weighted octave sum, normalized by the weight total.
double fbm(const Vec3& p_mm, const NoiseParams& params);

/// amplitude_hu * fbm evaluated at every voxel center (mm).
Volume noise_volume(const GridGeometry& grid, const NoiseParams& params);

/// Voxelwise sum.
Volume add_noise(const Volume& volume, const Volume& noise);

}  // namespace vsynth
