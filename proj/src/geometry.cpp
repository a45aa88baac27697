#include "vsynth/geometry.hpp"

#include <algorithm>
#include <cmath>

#include "vsynth/error.hpp"

namespace vsynth {

Vec3 rotate_about_axis(const Vec3& v, const Vec3& axis, double angle) {
  const double len = axis.norm();
  if (!(len > 0.0)) throw Error(Errc::ZeroAxis, "rotation axis has zero length");
  const Vec3 k = axis / len;
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  return v * c + k.cross(v) * s + k * (k.dot(v) * (1.0 - c));
}

double angle_between(const Vec3& a, const Vec3& b) {
  // atan2 form stays accurate near 0 and pi where acos loses digits.
  return std::atan2(a.cross(b).norm(), a.dot(b));
}

double normalized_triple_product(const Vec3& a, const Vec3& b, const Vec3& c) {
  return a.normalized().dot(b.normalized().cross(c.normalized()));
}

}  // namespace vsynth
