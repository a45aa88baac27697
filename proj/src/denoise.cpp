#include "vsynth/denoise.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace vsynth {

namespace {

// In-place box sum of half-width r along one axis (truncated at the edges).
void box_sum_axis(std::vector<double>& data, const Index3& d, int axis, int r) {
  const int n = d[axis];
  const int a1 = (axis + 1) % 3;
  const int a2 = (axis + 2) % 3;
  std::vector<double> prefix(static_cast<std::size_t>(n) + 1);
  std::size_t stride = 1;
  for (int a = 0; a < axis; ++a) stride *= static_cast<std::size_t>(d[a]);
  Index3 idx;
  for (int u = 0; u < d[a1]; ++u)
    for (int v = 0; v < d[a2]; ++v) {
      idx[a1] = u;
      idx[a2] = v;
      idx[axis] = 0;
      const std::size_t base =
          (static_cast<std::size_t>(idx.z()) * d.y() + idx.y()) * d.x() + idx.x();
      prefix[0] = 0.0;
      for (int t = 0; t < n; ++t) prefix[t + 1] = prefix[t] + data[base + t * stride];
      for (int t = 0; t < n; ++t) {
        const int lo = std::max(0, t - r);
        const int hi = std::min(n - 1, t + r);
        data[base + t * stride] = prefix[hi + 1] - prefix[lo];
      }
    }
}

int window_count(int t, int n, int r) { return std::min(n - 1, t + r) - std::max(0, t - r) + 1; }

}  // namespace

void DenoiseParams::validate() const {
  if (!(h > 0.0) || !std::isfinite(h)) throw Error(Errc::InvalidParams, "h must be positive");
  if (patch_radius < 0) throw Error(Errc::InvalidParams, "patch_radius must be >= 0");
}

Volume temporal_nlm(std::span<const Volume> frames, const DenoiseParams& params) {
  params.validate();
  if (frames.size() < 2) throw Error(Errc::TooFewFrames, "temporal NLM needs at least two frames");
  const Volume& reference = frames.front();
  for (const Volume& f : frames) require_same_shape(reference, f, "frames differ in shape");
  const GridGeometry& g = reference.geometry();
  validate_geometry(g);
  const Index3 d = g.dims;
  const std::size_t count = g.voxel_count();
  const int r = params.patch_radius;
  const double inv_h2 = 1.0 / (params.h * params.h);

  std::vector<double> numerator(count);
  std::vector<double> denominator(count, 1.0);
  for (std::size_t n = 0; n < count; ++n) numerator[n] = reference[n];

  std::vector<double> sq(count);
  for (std::size_t t = 1; t < frames.size(); ++t) {
    const Volume& frame = frames[t];
    for (std::size_t n = 0; n < count; ++n) {
      const double diff = static_cast<double>(frame[n]) - static_cast<double>(reference[n]);
      sq[n] = diff * diff;
    }
    if (r > 0)
      for (int axis = 0; axis < 3; ++axis) box_sum_axis(sq, d, axis, r);
    for (int k = 0; k < d.z(); ++k)
      for (int j = 0; j < d.y(); ++j) {
        const int cyz = window_count(j, d.y(), r) * window_count(k, d.z(), r);
        for (int i = 0; i < d.x(); ++i) {
          const std::size_t n = g.offset(i, j, k);
          const double patch = r > 0 ? static_cast<double>(cyz * window_count(i, d.x(), r)) : 1.0;
          const double w = std::exp(-(sq[n] / patch) * inv_h2);
          numerator[n] += w * static_cast<double>(frame[n]);
          denominator[n] += w;
        }
      }
  }

  Volume out(g, 0.0f);
  for (std::size_t n = 0; n < count; ++n) out[n] = static_cast<float>(numerator[n] / denominator[n]);
  return out;
}

}  // namespace vsynth
