#include "vsynth/dataset.hpp"

#include <algorithm>
#include <cmath>

#include "vsynth/raster.hpp"

namespace vsynth {

namespace {

double ellipsoid_radius(const Vec3& p, const Vec3& center, const Vec3& semi_axes) {
  return (p - center).cwiseQuotient(semi_axes).norm();
}

}  // namespace

Mask rasterize_hemisphere(const Tree& tree, const GridGeometry& grid, int supersample,
                          const GridGeometry& atlas_grid, int midsagittal_x, bool left) {
  Mask mask = rasterize_tree(tree, grid, supersample);
  for (int i = 0; i < grid.dims.x(); ++i) {
    const double x = grid.voxel_center(i, 0, 0).x();
    const auto ax = static_cast<long long>(std::floor((x - atlas_grid.origin.x()) / atlas_grid.spacing.x()));
    const bool on_left = ax < midsagittal_x;
    if (on_left == left) continue;
    for (int k = 0; k < grid.dims.z(); ++k)
      for (int j = 0; j < grid.dims.y(); ++j) mask(i, j, k) = 0;
  }
  return mask;
}

TrainingExample make_training_example(const ExampleSpec& spec) {
  if (spec.background_labeled)
    throw Error(Errc::LabeledBackground, "synthetic vessels are never rendered into labeled scans");
  const GridGeometry& grid = spec.background.geometry();
  validate_geometry(grid);
  validate_geometry(spec.atlas.geometry());

  const Atlas binary = binarize(spec.atlas, spec.atlas_threshold);
  const int mid = spec.midsagittal_x < 0 ? binary.dims().x() / 2 : spec.midsagittal_x;
  auto [left, right] = split_hemispheres(binary, mid);
  std::array<Atlas, 2> hemispheres{std::move(left), std::move(right)};

  TrainingExample out;
  Mask mask(grid, 0);
  for (std::size_t h = 0; h < 2; ++h) {
    GrowthParams params = spec.growth[h];
    params.seed = derive_seed(spec.seed, h == 0 ? static_cast<std::uint64_t>(ExampleStream::left_tree)
                                                : static_cast<std::uint64_t>(ExampleStream::right_tree));
    Rng rng(params.seed);
    out.trees[h] = grow_tree(params, hemispheres[h], spec.root_positions[h], spec.root_directions[h], rng);
    const Mask part =
        rasterize_hemisphere(out.trees[h], grid, spec.supersample, binary.geometry(), mid, h == 0);
    for (std::size_t n = 0; n < mask.size(); ++n) mask[n] |= part[n];
  }

  Volume volume = blend_vessels(spec.background, mask, spec.contrast_hu, spec.edge_sigma_mm);
  NoiseParams noise = spec.noise;
  noise.seed = derive_seed(spec.seed, static_cast<std::uint64_t>(ExampleStream::noise));
  volume = add_noise(volume, noise_volume(grid, noise));

  if (spec.augment) {
    Rng rng(derive_seed(spec.seed, static_cast<std::uint64_t>(ExampleStream::augment)));
    auto [v, m] = random_rigid(volume, mask, *spec.augment, rng);
    volume = std::move(v);
    mask = std::move(m);
  }
  out.volume = std::move(volume);
  out.mask = std::move(mask);
  return out;
}

Mask expand_ground_truth(const Mask& mask, const Volume& volume, double lo, double hi) {
  require_same_shape(mask, volume, "expand_ground_truth: mask and volume differ in shape");
  if (!(lo < hi)) throw Error(Errc::InvalidParams, "expand_ground_truth needs lo < hi");
  const Index3 d = mask.dims();
  Mask out = mask;
  for (int k = 0; k < d.z(); ++k)
    for (int j = 0; j < d.y(); ++j)
      for (int i = 0; i < d.x(); ++i) {
        if (mask(i, j, k) == 0) continue;
        for (int dz : {-1, 1}) {
          const int z = k + dz;
          if (z < 0 || z >= d.z()) continue;
          const double v = volume(i, j, z);
          if (v >= lo && v < hi) out(i, j, z) = 1;
        }
      }
  return out;
}

double dice(const Mask& a, const Mask& b) {
  require_same_shape(a, b, "dice: masks differ in shape");
  std::size_t na = 0, nb = 0, both = 0;
  for (std::size_t n = 0; n < a.size(); ++n) {
    const bool x = a[n] != 0;
    const bool y = b[n] != 0;
    na += x;
    nb += y;
    both += x && y;
  }
  if (na + nb == 0) return 1.0;
  return 2.0 * static_cast<double>(both) / static_cast<double>(na + nb);
}

PhantomLayout phantom_layout(const GridGeometry& grid) {
  PhantomLayout layout;
  layout.center = grid.center();
  layout.outer_semi_axes = 0.45 * grid.extent();
  const double thickness =
      std::max(2.0 * grid.spacing.maxCoeff(), 0.08 * layout.outer_semi_axes.minCoeff());
  layout.inner_semi_axes = (layout.outer_semi_axes.array() - thickness).max(grid.spacing.array()).matrix();
  return layout;
}

Volume phantom_background(const GridGeometry& grid, std::uint64_t seed) {
  validate_geometry(grid);
  const PhantomLayout layout = phantom_layout(grid);
  NoiseParams texture;
  texture.octaves = 2;
  texture.base_frequency = 0.15;
  texture.amplitude_hu = kPhantomTextureHu;
  texture.seed = seed;
  Volume out(grid, kAirHu);
  for (int k = 0; k < grid.dims.z(); ++k)
    for (int j = 0; j < grid.dims.y(); ++j)
      for (int i = 0; i < grid.dims.x(); ++i) {
        const Vec3 p = grid.voxel_center(i, j, k);
        if (ellipsoid_radius(p, layout.center, layout.outer_semi_axes) > 1.0) continue;
        if (ellipsoid_radius(p, layout.center, layout.inner_semi_axes) > 1.0) {
          out(i, j, k) = kBoneHu;
        } else {
          out(i, j, k) = static_cast<float>(kParenchymaHu + texture.amplitude_hu * fbm(p, texture));
        }
      }
  return out;
}

Atlas phantom_atlas(const GridGeometry& grid) {
  validate_geometry(grid);
  const PhantomLayout layout = phantom_layout(grid);
  const Vec3 brain = 0.9 * layout.inner_semi_axes;
  Atlas atlas(grid, 0.0f);
  for (int k = 0; k < grid.dims.z(); ++k)
    for (int j = 0; j < grid.dims.y(); ++j)
      for (int i = 0; i < grid.dims.x(); ++i)
        if (ellipsoid_radius(grid.voxel_center(i, j, k), layout.center, brain) <= 1.0)
          atlas(i, j, k) = 1.0f;
  return atlas;
}

std::array<Vec3, 2> phantom_roots(const GridGeometry& grid) {
  const PhantomLayout layout = phantom_layout(grid);
  const Vec3 brain = 0.9 * layout.inner_semi_axes;
  const Vec3 offset(0.3 * brain.x(), 0.0, -0.6 * brain.z());
  return {layout.center + Vec3(-offset.x(), offset.y(), offset.z()), layout.center + offset};
}

ExampleSpec desk_example_spec(const GridGeometry& grid, std::uint64_t phantom_seed) {
  ExampleSpec spec;
  spec.background = phantom_background(grid, phantom_seed);
  spec.atlas = phantom_atlas(grid);
  spec.root_positions = phantom_roots(grid);
  spec.root_directions = {Vec3::UnitZ(), Vec3::UnitZ()};
  for (GrowthParams& g : spec.growth) {
    g.r_min = 0.5;
    g.max_nodes = 2000;
    g.bifurcation_prob = 0.2;
  }
  return spec;
}

}  // namespace vsynth
