#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace vsynth {

/// Positions and direction vectors, in millimeters.
using Vec3 = Eigen::Vector3d;

/// Rotate `v` by `angle` radians (right-hand rule) about `axis` using
/// Rodrigues' formula. Throws Errc::ZeroAxis when the axis has zero length.
Vec3 rotate_about_axis(const Vec3& v, const Vec3& axis, double angle);

/// Unsigned angle in [0, pi] between two non-zero vectors.
double angle_between(const Vec3& a, const Vec3& b);

/// Scalar triple product a . (b x c) of the normalized inputs; zero iff coplanar.
double normalized_triple_product(const Vec3& a, const Vec3& b, const Vec3& c);

inline bool all_finite(const Vec3& v) { return v.allFinite(); }

}  // namespace vsynth
