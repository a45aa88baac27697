#include <random>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "vsynth/atlas.hpp"

using namespace vsynth;

namespace {

Atlas random_atlas(int n, std::uint64_t seed, double zero_fraction) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Atlas a(oracle::cube(n));
  // Coarse levels so exact ties are common.
  for (auto& v : a.values()) v = u(rng) < zero_fraction ? 0.0f : static_cast<float>(std::ceil(u(rng) * 4) / 4);
  return a;
}

}  // namespace

TEST_CASE("build_atlas averages masks") {
  const GridGeometry g = oracle::cube(4);
  Mask full(g, 1), empty(g, 0);
  std::vector<Mask> same{full, full};
  CHECK(build_atlas(same).values() == std::vector<float>(64, 1.0f));

  std::vector<Mask> half{full, empty};
  const Atlas mean = build_atlas(half);
  for (float v : mean.values()) CHECK(v == 0.5f);

  Mask one(g, 0);
  one(1, 2, 3) = 1;
  std::vector<Mask> three{one, empty, empty};
  const Atlas a = build_atlas(three);
  CHECK(a(1, 2, 3) == doctest::Approx(1.0 / 3.0));
  CHECK(a(0, 0, 0) == 0.0f);

  std::vector<Mask> mismatch{full, Mask(oracle::cube(5), 0)};
  CHECK_THROWS_AS(build_atlas(mismatch), Error);
}

TEST_CASE("binarize is inclusive") {
  Atlas a(oracle::cube(2), 0.5f);
  a(0, 0, 0) = 0.25f;
  CHECK(binarize(a, 0.5)(1, 1, 1) == 1.0f);
  CHECK(binarize(a, 0.5)(0, 0, 0) == 0.0f);
  const Atlas all = binarize(a, 0.0);
  const Atlas none = binarize(a, 0.51);
  for (float v : all.values()) CHECK(v == 1.0f);
  for (float v : none.values()) CHECK(v == 0.0f);
}

TEST_CASE("in_support uses the containing voxel") {
  GridGeometry g = oracle::cube(4, 2.0);
  g.origin = Vec3(-4, -4, -4);
  Atlas a(g, 0.0f);
  a(2, 2, 2) = 0.1f;
  CHECK(a.in_support(Vec3(0.0, 0.0, 0.0)));
  CHECK(a.in_support(Vec3(1.999, 1.999, 1.999)));
  CHECK_FALSE(a.in_support(Vec3(2.0, 0.0, 0.0)));
  CHECK_FALSE(a.in_support(Vec3(-0.001, 0.0, 0.0)));
  CHECK_FALSE(a.in_support(Vec3(100, 0, 0)));
}

TEST_CASE("sample_target examples") {
  Atlas a(oracle::cube(11), 0.0f);
  const Vec3 c = a.geometry().voxel_center(5, 5, 5);
  CHECK_FALSE(sample_target(a, c, 3.0));

  a(6, 5, 5) = 0.2f;
  CHECK(*sample_target(a, c, 3.0) == a.geometry().voxel_center(6, 5, 5));

  // Equal maxima at different distances: the nearer wins.
  a(5, 5, 7) = 0.7f;
  a(5, 5, 3 + 1) = 0.7f;
  CHECK(*sample_target(a, c, 3.0) == a.geometry().voxel_center(5, 5, 4));
  // Out of range values are ignored.
  a(0, 0, 0) = 1.0f;
  CHECK(*sample_target(a, c, 3.0) == a.geometry().voxel_center(5, 5, 4));
}

TEST_CASE("sample_target agrees with a brute-force scan") {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const Atlas a = random_atlas(12, seed, 0.6);
    std::mt19937_64 rng(seed + 100);
    std::uniform_real_distribution<double> u(-2.0, 14.0);
    const Vec3 p(u(rng), u(rng), u(rng));
    const double radius = 1.0 + std::abs(u(rng)) / 2.0;

    std::optional<std::tuple<float, double, int, int, int>> best;
    for (int k = 0; k < 12; ++k)
      for (int j = 0; j < 12; ++j)
        for (int i = 0; i < 12; ++i) {
          const double d2 = (a.geometry().voxel_center(i, j, k) - p).squaredNorm();
          if (d2 > radius * radius || a(i, j, k) <= 0.0f) continue;
          const auto cand = std::make_tuple(-a(i, j, k), d2, i, j, k);
          if (!best || cand < *best) best = cand;
        }
    const auto got = sample_target(a, p, radius);
    REQUIRE(got.has_value() == best.has_value());
    if (best) {
      const auto [nv, d2, i, j, k] = *best;
      CHECK(*got == a.geometry().voxel_center(i, j, k));
    }
  }
}

TEST_CASE("decrement_neighborhood examples") {
  Atlas a(oracle::cube(9), 0.4f);
  const Vec3 c = a.geometry().voxel_center(4, 4, 4);
  Atlas same = a;
  decrement_neighborhood(same, c, 1.0, 0.0, 2.0);
  CHECK(same == a);

  Atlas cleared = a;
  decrement_neighborhood(cleared, c, 1.0, 1.0, 2.0);
  CHECK(cleared(4, 4, 4) == 0.0f);
  CHECK(cleared(4, 4, 6) == 0.0f);
  CHECK(cleared(4, 4, 7) == 0.4f);
  CHECK(cleared(5, 5, 5) == 0.0f);  // sqrt(3) <= 2
  CHECK(cleared(6, 6, 4) == 0.4f);  // sqrt(8) > 2

  Atlas partial = a;
  decrement_neighborhood(partial, c, 1.0, 0.25, 1.0);
  CHECK(partial(4, 4, 4) == doctest::Approx(0.15));
  CHECK(partial(4, 4, 5) == doctest::Approx(0.15));
  CHECK(partial(4, 5, 5) == 0.4f);
}

TEST_CASE("atlas values stay in the unit interval") {
  Atlas a = random_atlas(10, 3, 0.2);
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0.0, 10.0);
  for (int n = 0; n < 200; ++n)
    decrement_neighborhood(a, Vec3(u(rng), u(rng), u(rng)), u(rng) / 4, u(rng) / 10, 1.0);
  for (float v : a.values()) {
    CHECK(v >= 0.0f);
    CHECK(v <= 1.0f);
  }
}

TEST_CASE("split_hemispheres partitions the support") {
  const Atlas a = random_atlas(10, 9, 0.3);
  const auto [left0, right0] = split_hemispheres(a, 0);
  for (float v : left0.values()) CHECK(v == 0.0f);
  CHECK(right0 == a);

  const auto [left, right] = split_hemispheres(a, 4);
  for (int k = 0; k < 10; ++k)
    for (int j = 0; j < 10; ++j)
      for (int i = 0; i < 10; ++i) {
        CHECK(left(i, j, k) + right(i, j, k) == a(i, j, k));
        CHECK_FALSE((left(i, j, k) > 0.0f && right(i, j, k) > 0.0f));
        if (i >= 4) CHECK(left(i, j, k) == 0.0f);
        if (i < 4) CHECK(right(i, j, k) == 0.0f);
      }
  CHECK_THROWS_AS(split_hemispheres(a, 10), Error);
  CHECK_THROWS_AS(split_hemispheres(a, -1), Error);
}
