#pragma once

#include <Eigen/Core>
#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "vsynth/error.hpp"
#include "vsynth/geometry.hpp"

namespace vsynth {

using Index3 = Eigen::Array3i;

/// Voxel (i,j,k) spans [origin + i*spacing, origin + (i+1)*spacing) per axis.
struct GridGeometry {
  Index3 dims{0, 0, 0};
  Vec3 spacing{1.0, 1.0, 1.0};
  Vec3 origin{0.0, 0.0, 0.0};

  std::size_t voxel_count() const {
    return static_cast<std::size_t>(dims.x()) * static_cast<std::size_t>(dims.y()) *
           static_cast<std::size_t>(dims.z());
  }
  bool empty() const { return (dims <= 0).any(); }

  /// Linear offset, x fastest.
  std::size_t offset(int i, int j, int k) const {
    return (static_cast<std::size_t>(k) * dims.y() + j) * dims.x() + i;
  }
  bool contains(int i, int j, int k) const {
    return i >= 0 && j >= 0 && k >= 0 && i < dims.x() && j < dims.y() && k < dims.z();
  }
  Vec3 voxel_center(int i, int j, int k) const {
    return origin + (Vec3(i, j, k).array() + 0.5).matrix().cwiseProduct(spacing);
  }
  /// Continuous voxel coordinate: integer values fall on voxel centers.
  Vec3 to_continuous_index(const Vec3& p) const {
    return ((p - origin).cwiseQuotient(spacing).array() - 0.5).matrix();
  }
  /// Containing voxel by floor, or nothing when outside the grid.
  std::optional<Index3> voxel_of(const Vec3& p) const {
    const Vec3 u = (p - origin).cwiseQuotient(spacing);
    if (!u.allFinite()) return std::nullopt;
    const Index3 v(static_cast<int>(std::floor(u.x())), static_cast<int>(std::floor(u.y())),
                   static_cast<int>(std::floor(u.z())));
    if (!contains(v.x(), v.y(), v.z())) return std::nullopt;
    return v;
  }
  Vec3 extent() const { return dims.cast<double>().matrix().cwiseProduct(spacing); }
  Vec3 center() const { return origin + 0.5 * extent(); }

  bool operator==(const GridGeometry& o) const {
    return (dims == o.dims).all() && spacing == o.spacing && origin == o.origin;
  }
  /// Shape compatibility used by voxelwise operations: dims and spacing match.
  bool same_shape(const GridGeometry& o) const {
    return (dims == o.dims).all() && spacing == o.spacing;
  }
};

/// Throws Errc::EmptyGrid / Errc::InvalidParams for unusable geometry.
void validate_geometry(const GridGeometry& geometry);

/// Dense 3D scalar grid with spacing metadata, x-fastest storage.
template <typename Scalar>
class Grid {
 public:
  using value_type = Scalar;

  Grid() = default;
  explicit Grid(GridGeometry geometry, Scalar fill = Scalar{})
      : geometry_(std::move(geometry)), values_(geometry_.voxel_count(), fill) {}

  const GridGeometry& geometry() const { return geometry_; }
  const Index3& dims() const { return geometry_.dims; }
  std::size_t size() const { return values_.size(); }

  Scalar& operator()(int i, int j, int k) { return values_[geometry_.offset(i, j, k)]; }
  const Scalar& operator()(int i, int j, int k) const { return values_[geometry_.offset(i, j, k)]; }
  Scalar& operator[](std::size_t n) { return values_[n]; }
  const Scalar& operator[](std::size_t n) const { return values_[n]; }

  /// Out-of-grid reads return `outside`.
  Scalar value_or(int i, int j, int k, Scalar outside) const {
    return geometry_.contains(i, j, k) ? (*this)(i, j, k) : outside;
  }

  std::vector<Scalar>& values() { return values_; }
  const std::vector<Scalar>& values() const { return values_; }

  bool operator==(const Grid& o) const { return geometry_ == o.geometry_ && values_ == o.values_; }

 private:
  GridGeometry geometry_;
  std::vector<Scalar> values_;
};

/// CT-like intensities (HU).
using Volume = Grid<float>;
/// Binary label grid, values in {0, 1}.
using Mask = Grid<std::uint8_t>;

template <typename A, typename B>
void require_same_shape(const Grid<A>& a, const Grid<B>& b, const char* what) {
  if (!a.geometry().same_shape(b.geometry())) throw Error(Errc::ShapeMismatch, what);
}

/// Visit every in-grid voxel whose center lies within `radius` of `center`
/// (closed ball). `fn(i, j, k, squared_distance_mm)`; iteration is z, y, x
/// nested with x innermost.
template <typename Fn>
void for_each_voxel_in_ball(const GridGeometry& g, const Vec3& center, double radius, Fn&& fn) {
  if (!(radius >= 0.0) || !center.allFinite()) return;
  const Vec3 u = g.to_continuous_index(center);
  int lo[3];
  int hi[3];
  for (int a = 0; a < 3; ++a) {
    const double reach = radius / g.spacing[a];
    lo[a] = std::max(0, static_cast<int>(std::ceil(u[a] - reach)));
    hi[a] = std::min(g.dims[a] - 1, static_cast<int>(std::floor(u[a] + reach)));
    if (lo[a] > hi[a]) return;
  }
  const double r2 = radius * radius;
  for (int k = lo[2]; k <= hi[2]; ++k) {
    const double dz = g.origin.z() + (k + 0.5) * g.spacing.z() - center.z();
    for (int j = lo[1]; j <= hi[1]; ++j) {
      const double dy = g.origin.y() + (j + 0.5) * g.spacing.y() - center.y();
      const double dyz = dy * dy + dz * dz;
      if (dyz > r2) continue;
      for (int i = lo[0]; i <= hi[0]; ++i) {
        const double dx = g.origin.x() + (i + 0.5) * g.spacing.x() - center.x();
        const double d2 = dx * dx + dyz;
        if (d2 <= r2) fn(i, j, k, d2);
      }
    }
  }
}

/// Number of set voxels.
std::size_t count_set(const Mask& mask);

}  // namespace vsynth
