#include "vsynth/raster.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <sstream>
#include <string>

namespace vsynth {

Mask rasterize_tree(const Tree& tree, const GridGeometry& grid, int supersample) {
  validate_geometry(grid);
  if (supersample < 1) throw Error(Errc::InvalidParams, "supersample must be >= 1");
  const int ss = supersample;
  const std::size_t samples = static_cast<std::size_t>(ss) * ss * ss;
  const std::size_t words = (samples + 63) / 64;
  std::vector<std::uint64_t> hits(grid.voxel_count() * words, 0);

  // Sub-sample offsets inside a voxel, in voxel units from its lower corner.
  std::vector<double> frac(static_cast<std::size_t>(ss));
  for (int a = 0; a < ss; ++a) frac[a] = (a + 0.5) / ss;

  for (const Node& node : tree.arena()) {
    if (!node.alive) continue;
    const double r = node.radius();
    if (!(r > 0.0)) continue;
    const Vec3& c = node.position;
    const double r2 = r * r;
    int lo[3];
    int hi[3];
    bool outside = false;
    for (int a = 0; a < 3; ++a) {
      lo[a] = std::max(0, static_cast<int>(std::floor((c[a] - r - grid.origin[a]) / grid.spacing[a])));
      hi[a] = std::min(grid.dims[a] - 1,
                       static_cast<int>(std::floor((c[a] + r - grid.origin[a]) / grid.spacing[a])));
      outside |= lo[a] > hi[a];
    }
    if (outside) continue;
    for (int k = lo[2]; k <= hi[2]; ++k)
      for (int j = lo[1]; j <= hi[1]; ++j)
        for (int i = lo[0]; i <= hi[0]; ++i) {
          std::uint64_t* bits = &hits[grid.offset(i, j, k) * words];
          std::size_t s = 0;
          for (int c2 = 0; c2 < ss; ++c2) {
            const double dz = grid.origin.z() + (k + frac[c2]) * grid.spacing.z() - c.z();
            for (int b = 0; b < ss; ++b) {
              const double dy = grid.origin.y() + (j + frac[b]) * grid.spacing.y() - c.y();
              for (int a = 0; a < ss; ++a, ++s) {
                const double dx = grid.origin.x() + (i + frac[a]) * grid.spacing.x() - c.x();
                if (dx * dx + dy * dy + dz * dz <= r2) bits[s / 64] |= std::uint64_t{1} << (s % 64);
              }
            }
          }
        }
  }

  Mask mask(grid, 0);
  for (std::size_t n = 0; n < mask.size(); ++n) {
    std::size_t count = 0;
    for (std::size_t w = 0; w < words; ++w) count += std::popcount(hits[n * words + w]);
    mask[n] = 2 * count >= samples ? 1 : 0;
  }
  return mask;
}

namespace {

std::vector<double> gaussian_kernel(double sigma_vox) {
  const int half = std::max(1, static_cast<int>(std::ceil(3.0 * sigma_vox)));
  std::vector<double> k(static_cast<std::size_t>(2 * half + 1));
  double sum = 0.0;
  for (int t = -half; t <= half; ++t) {
    const double v = std::exp(-0.5 * (t * t) / (sigma_vox * sigma_vox));
    k[static_cast<std::size_t>(t + half)] = v;
    sum += v;
  }
  for (double& v : k) v /= sum;
  return k;
}

void convolve_axis(Grid<double>& g, int axis, const std::vector<double>& kernel) {
  const Index3 d = g.dims();
  const int half = static_cast<int>(kernel.size() / 2);
  const int n = d[axis];
  std::vector<double> line(static_cast<std::size_t>(n));
  Index3 idx;
  const int a1 = (axis + 1) % 3;
  const int a2 = (axis + 2) % 3;
  for (int u = 0; u < d[a1]; ++u)
    for (int v = 0; v < d[a2]; ++v) {
      idx[a1] = u;
      idx[a2] = v;
      for (int t = 0; t < n; ++t) {
        idx[axis] = t;
        line[t] = g(idx.x(), idx.y(), idx.z());
      }
      for (int t = 0; t < n; ++t) {
        double acc = 0.0;
        for (int o = -half; o <= half; ++o) {
          const int s = t + o;
          if (s >= 0 && s < n) acc += kernel[static_cast<std::size_t>(o + half)] * line[s];
        }
        idx[axis] = t;
        g(idx.x(), idx.y(), idx.z()) = acc;
      }
    }
}

}  // namespace

Grid<double> soft_occupancy(const Mask& mask, double sigma_mm) {
  if (!(sigma_mm >= 0.0)) throw Error(Errc::InvalidParams, "edge sigma must be >= 0");
  Grid<double> occ(mask.geometry(), 0.0);
  for (std::size_t n = 0; n < mask.size(); ++n) occ[n] = mask[n] != 0 ? 1.0 : 0.0;
  if (sigma_mm == 0.0) return occ;
  for (int axis = 0; axis < 3; ++axis)
    convolve_axis(occ, axis, gaussian_kernel(sigma_mm / mask.geometry().spacing[axis]));
  for (double& v : occ.values()) v = std::clamp(v, 0.0, 1.0);
  return occ;
}

Volume blend_vessels(const Volume& background, const Mask& mask, double contrast_hu,
                     double edge_sigma_mm) {
  require_same_shape(background, mask, "blend: background and mask differ in shape");
  if (!std::isfinite(contrast_hu)) throw Error(Errc::InvalidParams, "contrast must be finite");
  if (contrast_hu < kContrastLowHu || contrast_hu >= kContrastHighHu) {
    std::ostringstream msg;
    msg << "ContrastOutOfRange: contrast " << contrast_hu << " HU outside [" << kContrastLowHu
        << ", " << kContrastHighHu << ")";
    warn(msg.str());
  }
  const Grid<double> occ = soft_occupancy(mask, edge_sigma_mm);
  Volume out = background;
  for (std::size_t n = 0; n < out.size(); ++n) {
    const double o = occ[n];
    if (o == 0.0) continue;
    out[n] = static_cast<float>(static_cast<double>(background[n]) * (1.0 - o) + contrast_hu * o);
  }
  return out;
}

}  // namespace vsynth
