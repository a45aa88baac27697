#include "vsynth/augment.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <numbers>

namespace vsynth {

namespace {

// Keeps exact lattice hits exact after rotations by multiples of 90 degrees.
constexpr double kSnap = 1e-6;

double snap(double u) {
  const double r = std::round(u);
  return std::abs(u - r) < kSnap ? r : u;
}

double uniform(const Range& r, Rng& rng) {
  return std::uniform_real_distribution<double>(r[0], r[1])(rng);
}

void check_range(const Range& r, const char* name) {
  if (!(r[0] <= r[1]) || !std::isfinite(r[0]) || !std::isfinite(r[1]))
    throw Error(Errc::InvalidParams, std::string(name) + " range must be ordered and finite");
}

template <typename Sample>
void pull_resample(const GridGeometry& g, const Eigen::Affine3d& forward, Sample&& sample) {
  const Eigen::Affine3d inverse = forward.inverse();
  for (int k = 0; k < g.dims.z(); ++k)
    for (int j = 0; j < g.dims.y(); ++j)
      for (int i = 0; i < g.dims.x(); ++i) {
        const Vec3 src = g.to_continuous_index(inverse * g.voxel_center(i, j, k));
        sample(i, j, k, Vec3(snap(src.x()), snap(src.y()), snap(src.z())));
      }
}

}  // namespace

void AugmentParams::validate() const {
  check_range(rot_axial, "rot_axial");
  check_range(rot_coronal, "rot_coronal");
  check_range(rot_sagittal, "rot_sagittal");
  check_range(trans_z_frac, "trans_z_frac");
  check_range(trans_xy_frac, "trans_xy_frac");
  if (!(mirror_sagittal_prob >= 0.0 && mirror_sagittal_prob <= 1.0))
    throw Error(Errc::InvalidParams, "mirror_sagittal_prob must lie in [0,1]");
}

RigidSample sample_rigid(const AugmentParams& params, Rng& rng) {
  params.validate();
  RigidSample s;
  s.axial_deg = uniform(params.rot_axial, rng);
  s.coronal_deg = uniform(params.rot_coronal, rng);
  s.sagittal_deg = uniform(params.rot_sagittal, rng);
  s.translation_frac.x() = uniform(params.trans_xy_frac, rng);
  s.translation_frac.y() = uniform(params.trans_xy_frac, rng);
  s.translation_frac.z() = uniform(params.trans_z_frac, rng);
  s.mirror = std::uniform_real_distribution<double>(0.0, 1.0)(rng) < params.mirror_sagittal_prob;
  return s;
}

Eigen::Affine3d rigid_transform(const RigidSample& s, const GridGeometry& grid) {
  constexpr double deg = std::numbers::pi / 180.0;
  const Eigen::Matrix3d rotation =
      (Eigen::AngleAxisd(s.sagittal_deg * deg, Vec3::UnitX()) *
       Eigen::AngleAxisd(s.coronal_deg * deg, Vec3::UnitY()) *
       Eigen::AngleAxisd(s.axial_deg * deg, Vec3::UnitZ()))
          .toRotationMatrix();
  Eigen::Matrix3d linear = rotation;
  if (s.mirror) linear.col(0) *= -1.0;
  const Vec3 c = grid.center();
  const Vec3 t = s.translation_frac.cwiseProduct(grid.extent());
  Eigen::Affine3d forward = Eigen::Affine3d::Identity();
  forward.linear() = linear;
  forward.translation() = c + t - linear * c;
  return forward;
}

Volume resample_trilinear(const Volume& volume, const Eigen::Affine3d& forward, float fill) {
  const GridGeometry& g = volume.geometry();
  Volume out(g, fill);
  pull_resample(g, forward, [&](int i, int j, int k, const Vec3& u) {
    if ((u.array() < 0.0).any() || u.x() > g.dims.x() - 1 || u.y() > g.dims.y() - 1 ||
        u.z() > g.dims.z() - 1)
      return;
    const int x0 = static_cast<int>(std::floor(u.x()));
    const int y0 = static_cast<int>(std::floor(u.y()));
    const int z0 = static_cast<int>(std::floor(u.z()));
    const double fx = u.x() - x0;
    const double fy = u.y() - y0;
    const double fz = u.z() - z0;
    const int x1 = std::min(x0 + 1, g.dims.x() - 1);
    const int y1 = std::min(y0 + 1, g.dims.y() - 1);
    const int z1 = std::min(z0 + 1, g.dims.z() - 1);
    auto at = [&](int a, int b, int c) { return static_cast<double>(volume(a, b, c)); };
    if (fx == 0.0 && fy == 0.0 && fz == 0.0) {
      out(i, j, k) = volume(x0, y0, z0);
      return;
    }
    const double c00 = at(x0, y0, z0) * (1 - fx) + at(x1, y0, z0) * fx;
    const double c10 = at(x0, y1, z0) * (1 - fx) + at(x1, y1, z0) * fx;
    const double c01 = at(x0, y0, z1) * (1 - fx) + at(x1, y0, z1) * fx;
    const double c11 = at(x0, y1, z1) * (1 - fx) + at(x1, y1, z1) * fx;
    const double c0 = c00 * (1 - fy) + c10 * fy;
    const double c1 = c01 * (1 - fy) + c11 * fy;
    out(i, j, k) = static_cast<float>(c0 * (1 - fz) + c1 * fz);
  });
  return out;
}

Mask resample_nearest(const Mask& mask, const Eigen::Affine3d& forward, std::uint8_t fill) {
  const GridGeometry& g = mask.geometry();
  Mask out(g, fill);
  pull_resample(g, forward, [&](int i, int j, int k, const Vec3& u) {
    const int x = static_cast<int>(std::lround(u.x()));
    const int y = static_cast<int>(std::lround(u.y()));
    const int z = static_cast<int>(std::lround(u.z()));
    if (g.contains(x, y, z)) out(i, j, k) = mask(x, y, z);
  });
  return out;
}

std::pair<Volume, Mask> apply_rigid(const Volume& volume, const Mask& mask, const RigidSample& sample,
                                    float fill_hu) {
  require_same_shape(volume, mask, "augment: volume and mask differ in shape");
  const Eigen::Affine3d forward = rigid_transform(sample, volume.geometry());
  return {resample_trilinear(volume, forward, fill_hu), resample_nearest(mask, forward, 0)};
}

std::pair<Volume, Mask> random_rigid(const Volume& volume, const Mask& mask,
                                     const AugmentParams& params, Rng& rng) {
  require_same_shape(volume, mask, "augment: volume and mask differ in shape");
  const RigidSample sample = sample_rigid(params, rng);
  return apply_rigid(volume, mask, sample, static_cast<float>(params.fill_hu));
}

}  // namespace vsynth
