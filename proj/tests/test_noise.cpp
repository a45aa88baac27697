#include <cmath>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "vsynth/noise.hpp"

using namespace vsynth;

TEST_CASE("perlin3 vanishes on the integer lattice") {
  std::mt19937_64 rng(1);
  std::uniform_int_distribution<int> u(-5000, 5000);
  for (int n = 0; n < 1000; ++n) {
    const Vec3 p(u(rng), u(rng), u(rng));
    CHECK(std::abs(perlin3(p, 17)) < 1e-12);
  }
}

TEST_CASE("perlin3 is deterministic and seed dependent") {
  const Vec3 p(1.37, -2.91, 0.44);
  CHECK(perlin3(p, 5) == perlin3(p, 5));
  int differ = 0;
  for (std::uint64_t s = 0; s < 20; ++s) differ += perlin3(p, s) != perlin3(p, s + 1);
  CHECK(differ >= 15);
}

TEST_CASE("perlin3 is bounded, Lipschitz and smooth") {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-100.0, 100.0);
  std::normal_distribution<double> dir(0.0, 1.0);
  double worst_l = 0.0;
  for (int n = 0; n < 10000; ++n) {
    const Vec3 p(u(rng), u(rng), u(rng));
    const double v = perlin3(p, 3);
    CHECK(std::abs(v) <= 1.0);
    const Vec3 h = Vec3(dir(rng), dir(rng), dir(rng)).normalized() * 1e-4;
    worst_l = std::max(worst_l, std::abs(perlin3(p + h, 3) - v) / h.norm());
  }
  CHECK(worst_l < 4.0);

  // Central-difference gradients at two step sizes agree.
  auto grad = [](const Vec3& p, double h) {
    Vec3 g;
    for (int a = 0; a < 3; ++a) {
      Vec3 e = Vec3::Zero();
      e[a] = h;
      g[a] = (perlin3(p + e, 3) - perlin3(p - e, 3)) / (2 * h);
    }
    return g;
  };
  for (int n = 0; n < 2000; ++n) {
    const Vec3 p(u(rng), u(rng), u(rng));
    const Vec3 g3 = grad(p, 1e-3);
    const Vec3 g4 = grad(p, 1e-4);
    CHECK((g3 - g4).norm() <= 0.05 * std::max(g4.norm(), 0.1));
  }
}

TEST_CASE("fbm composition") {
  NoiseParams p;
  p.seed = 77;
  p.octaves = 1;
  const Vec3 x(3.3, -1.2, 8.7);
  CHECK(fbm(x, p) == perlin3(x * p.base_frequency, 77));
  CHECK(fbm(Vec3::Zero(), p) == 0.0);

  p.octaves = 2;
  p.persistence = 0.5;
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-50.0, 50.0);
  for (int n = 0; n < 1000; ++n) {
    const Vec3 q(u(rng), u(rng), u(rng));
    const double f = p.base_frequency;
    const double hand = (perlin3(q * f, 77) + 0.5 * perlin3(q * (2 * f), 78)) / 1.5;
    CHECK(std::abs(fbm(q, p) - hand) <= 1e-12);
  }
  p.octaves = 5;
  for (int n = 0; n < 10000; ++n) CHECK(std::abs(fbm(Vec3(u(rng), u(rng), u(rng)), p)) <= 1.0);
}

TEST_CASE("noise_volume samples the field at voxel centers") {
  NoiseParams p;
  p.seed = 9;
  p.amplitude_hu = 12.0;
  GridGeometry g;
  g.dims = Index3(20, 17, 13);
  g.spacing = Vec3(0.8, 1.1, 1.7);
  g.origin = Vec3(-3, 4, 10);
  const Volume v = noise_volume(g, p);
  CHECK(v == noise_volume(g, p));
  auto direct = [&](int i, int j, int k) {
    return static_cast<float>(p.amplitude_hu * fbm(g.voxel_center(i, j, k), p));
  };
  // One slice along each axis.
  for (int j = 0; j < 17; ++j)
    for (int k = 0; k < 13; ++k) CHECK(v(7, j, k) == direct(7, j, k));
  for (int i = 0; i < 20; ++i)
    for (int k = 0; k < 13; ++k) CHECK(v(i, 5, k) == direct(i, 5, k));
  for (int i = 0; i < 20; ++i)
    for (int j = 0; j < 17; ++j) CHECK(v(i, j, 11) == direct(i, j, 11));

  p.amplitude_hu = 0.0;
  const Volume silent = noise_volume(g, p);
  for (float x : silent.values()) CHECK(x == 0.0f);
  CHECK_THROWS_AS(noise_volume(oracle::cube(0), p), Error);
}

TEST_CASE("noise volume mean is near zero") {
  NoiseParams p;
  p.amplitude_hu = 1.0;
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    p.seed = seed;
    const Volume v = noise_volume(oracle::cube(64), p);
    double sum = 0.0;
    for (float x : v.values()) sum += x;
    CHECK(std::abs(sum / static_cast<double>(v.size())) < 0.05);
  }
}

TEST_CASE("add_noise examples") {
  const GridGeometry g = oracle::cube(3);
  Volume a(g, 100.0f);
  Volume n(g, -12.5f);
  CHECK(add_noise(a, n)(1, 1, 1) == 87.5f);
  CHECK(add_noise(a, Volume(g, 0.0f)) == a);
  Volume minus(g, 12.5f);
  CHECK(add_noise(add_noise(a, n), minus) == a);
  CHECK_THROWS_AS(add_noise(a, Volume(oracle::cube(4))), Error);
}

TEST_CASE("noise parameter validation") {
  NoiseParams p;
  p.octaves = 0;
  CHECK_THROWS_AS(p.validate(), Error);
  p = NoiseParams{};
  p.lacunarity = 1.0;
  CHECK_THROWS_AS(p.validate(), Error);
  p = NoiseParams{};
  p.base_frequency = 0.0;
  CHECK_THROWS_AS(p.validate(), Error);
}
