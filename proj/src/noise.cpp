#include "vsynth/noise.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

namespace vsynth {

namespace {

// Cube-edge directions, padded to 16 with the usual duplicates; unit length.
constexpr double kInvSqrt2 = 0.70710678118654752440;
constexpr std::array<std::array<double, 3>, 16> kGradients{{
    {kInvSqrt2, kInvSqrt2, 0},   {-kInvSqrt2, kInvSqrt2, 0}, {kInvSqrt2, -kInvSqrt2, 0},
    {-kInvSqrt2, -kInvSqrt2, 0}, {kInvSqrt2, 0, kInvSqrt2},  {-kInvSqrt2, 0, kInvSqrt2},
    {kInvSqrt2, 0, -kInvSqrt2},  {-kInvSqrt2, 0, -kInvSqrt2}, {0, kInvSqrt2, kInvSqrt2},
    {0, -kInvSqrt2, kInvSqrt2},  {0, kInvSqrt2, -kInvSqrt2}, {0, -kInvSqrt2, -kInvSqrt2},
    {kInvSqrt2, kInvSqrt2, 0},   {-kInvSqrt2, kInvSqrt2, 0}, {0, -kInvSqrt2, kInvSqrt2},
    {0, -kInvSqrt2, -kInvSqrt2},
}};

// |noise| <= sqrt(3)/2 for unit gradients in 3D.
constexpr double kNormalization = 0.86602540378443864676;

std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::size_t gradient_index(std::int64_t x, std::int64_t y, std::int64_t z, std::uint64_t seed) {
  std::uint64_t h = mix64(seed + 0x9E3779B97F4A7C15ULL);
  h = mix64(h ^ static_cast<std::uint64_t>(x) * 0xD6E8FEB86659FD93ULL);
  h = mix64(h ^ static_cast<std::uint64_t>(y) * 0xA0761D6478BD642FULL);
  h = mix64(h ^ static_cast<std::uint64_t>(z) * 0xE7037ED1A0B428DBULL);
  return static_cast<std::size_t>(h >> 60);
}

double corner(std::int64_t x, std::int64_t y, std::int64_t z, std::uint64_t seed, double fx,
              double fy, double fz) {
  const auto& g = kGradients[gradient_index(x, y, z, seed)];
  return g[0] * fx + g[1] * fy + g[2] * fz;
}

double fade(double t) { return t * t * t * (t * (t * 6.0 - 15.0) + 10.0); }

double lerp(double a, double b, double t) { return a + t * (b - a); }

}  // namespace

void NoiseParams::validate() const {
  if (octaves < 1) throw Error(Errc::InvalidParams, "octaves must be >= 1");
  if (!(base_frequency > 0.0) || !std::isfinite(base_frequency))
    throw Error(Errc::InvalidParams, "base_frequency must be positive");
  if (!(persistence > 0.0)) throw Error(Errc::InvalidParams, "persistence must be positive");
  if (!(lacunarity > 1.0)) throw Error(Errc::InvalidParams, "lacunarity must exceed 1");
  if (!std::isfinite(amplitude_hu)) throw Error(Errc::InvalidParams, "amplitude must be finite");
}

double perlin3(const Vec3& p, std::uint64_t seed) {
  const double fx0 = std::floor(p.x());
  const double fy0 = std::floor(p.y());
  const double fz0 = std::floor(p.z());
  const auto x0 = static_cast<std::int64_t>(fx0);
  const auto y0 = static_cast<std::int64_t>(fy0);
  const auto z0 = static_cast<std::int64_t>(fz0);
  const double fx = p.x() - fx0;
  const double fy = p.y() - fy0;
  const double fz = p.z() - fz0;

  const double c000 = corner(x0, y0, z0, seed, fx, fy, fz);
  const double c100 = corner(x0 + 1, y0, z0, seed, fx - 1, fy, fz);
  const double c010 = corner(x0, y0 + 1, z0, seed, fx, fy - 1, fz);
  const double c110 = corner(x0 + 1, y0 + 1, z0, seed, fx - 1, fy - 1, fz);
  const double c001 = corner(x0, y0, z0 + 1, seed, fx, fy, fz - 1);
  const double c101 = corner(x0 + 1, y0, z0 + 1, seed, fx - 1, fy, fz - 1);
  const double c011 = corner(x0, y0 + 1, z0 + 1, seed, fx, fy - 1, fz - 1);
  const double c111 = corner(x0 + 1, y0 + 1, z0 + 1, seed, fx - 1, fy - 1, fz - 1);

  const double u = fade(fx);
  const double v = fade(fy);
  const double w = fade(fz);
  const double x00 = lerp(c000, c100, u);
  const double x10 = lerp(c010, c110, u);
  const double x01 = lerp(c001, c101, u);
  const double x11 = lerp(c011, c111, u);
  const double value = lerp(lerp(x00, x10, v), lerp(x01, x11, v), w) / kNormalization;
  return std::clamp(value, -1.0, 1.0);
}

double fbm(const Vec3& p_mm, const NoiseParams& params) {
  double sum = 0.0;
  double weight = 0.0;
  double amplitude = 1.0;
  double frequency = params.base_frequency;
  for (int o = 0; o < params.octaves; ++o) {
    sum += amplitude * perlin3(p_mm * frequency, params.seed + static_cast<std::uint64_t>(o));
    weight += amplitude;
    amplitude *= params.persistence;
    frequency *= params.lacunarity;
  }
  return sum / weight;
}

Volume noise_volume(const GridGeometry& grid, const NoiseParams& params) {
  validate_geometry(grid);
  params.validate();
  Volume out(grid, 0.0f);
  if (params.amplitude_hu == 0.0) return out;
  for (int k = 0; k < grid.dims.z(); ++k)
    for (int j = 0; j < grid.dims.y(); ++j)
      for (int i = 0; i < grid.dims.x(); ++i)
        out(i, j, k) =
            static_cast<float>(params.amplitude_hu * fbm(grid.voxel_center(i, j, k), params));
  return out;
}

Volume add_noise(const Volume& volume, const Volume& noise) {
  require_same_shape(volume, noise, "add_noise: volume and noise differ in shape");
  Volume out = volume;
  for (std::size_t n = 0; n < out.size(); ++n) out[n] = volume[n] + noise[n];
  return out;
}

}  // namespace vsynth
