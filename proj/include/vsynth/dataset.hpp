#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>

#include "vsynth/atlas.hpp"
#include "vsynth/augment.hpp"
#include "vsynth/growth.hpp"
#include "vsynth/noise.hpp"
#include "vsynth/tree.hpp"

namespace vsynth {

/// Everything needed to synthesize one labeled example. Index 0 is the left
/// hemisphere (low x), index 1 the right.
struct ExampleSpec {
  Volume background;
  bool background_labeled = false;
  Atlas atlas;
  double atlas_threshold = 0.05;
  /// Atlas x-index of the split plane; negative selects nx / 2.
  int midsagittal_x = -1;
  std::array<Vec3, 2> root_positions{Vec3::Zero(), Vec3::Zero()};
  /// Length times beta0 sets the root radius.
  std::array<Vec3, 2> root_directions{Vec3::UnitZ(), Vec3::UnitZ()};
  std::array<GrowthParams, 2> growth{};
  NoiseParams noise{};
  double contrast_hu = 300.0;
  double edge_sigma_mm = 0.0;
  int supersample = 2;
  std::optional<AugmentParams> augment;
  std::uint64_t seed = 0;
};

struct TrainingExample {
  Volume volume;
  Mask mask;
  std::array<Tree, 2> trees;
};

/// Sub-stream offsets used with derive_seed(spec.seed, offset).
enum class ExampleStream : std::uint64_t { left_tree = 0, right_tree = 1, noise = 2, augment = 3 };

/// Grow one tree per hemisphere, rasterize each clipped to its half-space,
/// blend into the background, add octave noise and optionally augment.
/// Component seeds inside the spec are ignored; all streams derive from spec.seed.
TrainingExample make_training_example(const ExampleSpec& spec);

/// Rasterize a tree and clear every voxel whose center falls on the other side
/// of the atlas split plane. `left` keeps atlas x-index < midsagittal_x.
Mask rasterize_hemisphere(const Tree& tree, const GridGeometry& grid, int supersample,
                          const GridGeometry& atlas_grid, int midsagittal_x, bool left);

/// Add voxels directly above/below (z +- 1) a set voxel whose intensity lies in
/// [lo, hi). One pass; newly added voxels do not propagate.
Mask expand_ground_truth(const Mask& mask, const Volume& volume, double lo = 95.0,
                         double hi = 450.0);

/// 2|A n B| / (|A| + |B|); 1 when both are empty.
double dice(const Mask& a, const Mask& b);

inline constexpr float kAirHu = -1000.0f;
inline constexpr float kBoneHu = 1000.0f;
inline constexpr float kParenchymaHu = 35.0f;
inline constexpr double kPhantomTextureHu = 5.0;

/// Ellipsoidal head: outer semi-axes 0.45 * extent, bone shell, parenchyma
/// interior with fbm texture of amplitude kPhantomTextureHu, air outside.
struct PhantomLayout {
  Vec3 center;
  Vec3 outer_semi_axes;
  Vec3 inner_semi_axes;
};
PhantomLayout phantom_layout(const GridGeometry& grid);
Volume phantom_background(const GridGeometry& grid, std::uint64_t seed);

/// Binary density filling the phantom's brain region (inner ellipsoid shrunk by 10%).
Atlas phantom_atlas(const GridGeometry& grid);

/// Root positions near the skull base of each phantom hemisphere.
std::array<Vec3, 2> phantom_roots(const GridGeometry& grid);

/// Phantom background, phantom atlas, phantom roots and growth parameters sized
/// for a desk-scale run on `grid` (root radius 3 mm, r_min 0.5 mm, 2000 nodes
/// per tree).
ExampleSpec desk_example_spec(const GridGeometry& grid, std::uint64_t phantom_seed);

}  // namespace vsynth
