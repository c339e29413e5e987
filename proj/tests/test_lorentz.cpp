#include <gtest/gtest.h>

#include <random>
#include <set>

#include "oracles.hpp"
#include "qrevival/lorentz.hpp"

using namespace qrevival;

namespace {

const std::vector<int> kDs{1, 2, 3, 5, 6, 7};

// Integer points of D x^2 - y^2 - z^2 = rhs with 0 < x <= x_max, by scanning y, z.
std::set<Solution3> brute_form_points(std::int64_t D, std::int64_t rhs, std::int64_t x_max) {
  std::set<Solution3> out;
  for (std::int64_t x = 1; x <= x_max; ++x) {
    const std::int64_t r = D * x * x - rhs;
    if (r < 0) continue;
    for (std::int64_t y = -x * 3; y <= x * 3; ++y) {
      const std::int64_t zz = r - y * y;
      if (zz < 0) continue;
      oracle::u128 z = 0;
      if (!oracle::is_square(static_cast<oracle::u128>(zz), &z)) continue;
      const auto zi = static_cast<std::int64_t>(z);
      out.insert({x, y, zi});
      out.insert({x, y, -zi});
    }
  }
  return out;
}

std::set<std::pair<std::int64_t, std::int64_t>> yz_pairs(const std::vector<Solution3>& pts) {
  std::set<std::pair<std::int64_t, std::int64_t>> out;
  for (const auto& v : pts) out.emplace(to_int64(v.y), to_int64(v.z));
  return out;
}

}  // namespace

TEST(AutomorphCheck, Basics) {
  EXPECT_TRUE(automorph_check(Matrix3::identity(), 1));
  EXPECT_TRUE(automorph_check(Matrix3::identity(), 7));
  EXPECT_FALSE(automorph_check(Matrix3::diagonal(1, 1, -1), 1));
  EXPECT_FALSE(automorph_check(Matrix3::diagonal(-1, -1, 1), 1));  // det 1 but reverses the cone
  EXPECT_FALSE(automorph_check(Matrix3::diagonal(1, 2, 1), 2));
}

TEST(MapToAutomorph, IdentityElement) {
  for (int D : kDs) {
    EXPECT_EQ(map_to_automorph({-1, 0, 0, 0, GammaScale::one}, D), Matrix3::identity()) << D;
    EXPECT_EQ(map_to_automorph({1, 0, 0, 0, GammaScale::one}, D), Matrix3::identity()) << D;
  }
}

TEST(MapToAutomorph, RejectsBadDeterminantOrParity) {
  EXPECT_THROW(map_to_automorph({1, 1, 0, 0, GammaScale::one}, 2), std::invalid_argument);
  EXPECT_THROW(map_to_automorph({1, 1, 0, 0, GammaScale::half}, 2), std::invalid_argument);
  // det condition holds (9 - 5*1 = 4) but entries are not all odd
  EXPECT_THROW(map_to_automorph({3, 0, 1, 0, GammaScale::half}, 5), std::invalid_argument);
}

TEST(MapToAutomorph, D2PreservesSeed) {
  const Automorph A = map_to_automorph({1, 0, 0, 0, GammaScale::one}, 2);
  EXPECT_TRUE(automorph_check(A, 2));
  const Solution3 v = A * Solution3{2, 1, 2};
  EXPECT_EQ(form_value(v, 2), 3);
}

// Property: every enumerated element maps to an integral automorph that
// preserves form values, across D in {1,2,3,5,6,7}.
TEST(EnumerateGamma, ImagesAreAutomorphs) {
  std::size_t total = 0;
  std::mt19937_64 rng(17);
  for (int D : kDs) {
    for (const auto& g : enumerate_gamma(D, 3)) {
      const Automorph A = map_to_automorph(g, D);
      ASSERT_TRUE(automorph_check(A, D));
      for (int i = 0; i < 5; ++i) {
        const Solution3 v{BigInt(static_cast<std::int64_t>(rng() % 41) - 20), BigInt(static_cast<std::int64_t>(rng() % 41) - 20),
                          BigInt(static_cast<std::int64_t>(rng() % 41) - 20)};
        ASSERT_EQ(form_value(A * v, D), form_value(v, D));
      }
      ++total;
    }
  }
  EXPECT_GE(total, 200u);
}

TEST(EnumerateGamma, ProductsAreAutomorphs) {
  std::mt19937_64 rng(23);
  for (int D : kDs) {
    const auto gens = automorphs_of(enumerate_gamma(D, 2), D);
    ASSERT_FALSE(gens.empty());
    for (int i = 0; i < 200; ++i) {
      const Automorph& A = gens[rng() % gens.size()];
      const Automorph& B = gens[rng() % gens.size()];
      ASSERT_TRUE(automorph_check(A * B, D)) << D;
      ASSERT_TRUE(automorph_check(A.adjugate(), D)) << D;
      ASSERT_EQ(A * A.adjugate(), Matrix3::identity());
    }
  }
}

TEST(EnumerateGamma, Counts) {
  EXPECT_EQ(enumerate_gamma(1, 2).size(), 36u);
  EXPECT_EQ(enumerate_gamma(1, 1).size(), 12u);
  for (int D : kDs) EXPECT_TRUE(enumerate_gamma(D, 0).empty()) << D;
  EXPECT_EQ(enumerate_gamma(2, 1).size(), 4u);
  EXPECT_THROW(enumerate_gamma(4, 1), std::invalid_argument);
}

// The scale-4 stratum needs all-odd entries; 4 | D - 1 or D even leaves it empty.
TEST(EnumerateGamma, ScaleFourStratum) {
  auto count_half = [](int D, int bound) {
    std::size_t n = 0;
    for (const auto& g : enumerate_gamma(D, bound)) n += g.scale == GammaScale::half;
    return n;
  };
  EXPECT_EQ(count_half(3, 3), 16u);
  EXPECT_EQ(count_half(7, 3), 8u);
  for (int D : {1, 2, 5, 6}) EXPECT_EQ(count_half(D, 3), 0u) << D;
}

TEST(ThetaGroup, TwelveElementsAtBoundTwo) {
  const auto th = enumerate_theta_group(2);
  EXPECT_EQ(th.size(), 12u);
  std::size_t coset = 0;
  for (const auto& t : th) coset += t.coset;
  EXPECT_EQ(coset, 2u);
}

// The isom1 route (theta group) and the isom2 route (D = 1) give the same
// automorphs at the smallest nontrivial bound: isom1 at entry bound 2 equals
// isom2 at bound 1. Larger bounds are not nested this way.
TEST(ThetaGroup, AgreesWithGammaRoute) {
  for (int B : {2}) {
    std::set<Automorph> via_theta;
    for (const auto& t : enumerate_theta_group(B)) {
      const Automorph A = map_theta_to_automorph(t);
      ASSERT_TRUE(automorph_check(A, 1));
      via_theta.insert(A);
    }
    const auto via_gamma = automorphs_of(enumerate_gamma(1, B - 1), 1);
    EXPECT_EQ(via_theta, std::set<Automorph>(via_gamma.begin(), via_gamma.end())) << B;
  }
}

TEST(Orbit, SixPairsForQsq6) {
  const auto gens = automorphs_of(enumerate_gamma(1, 2), 1);
  const auto pts = orbit({4, 1, 3}, 1, 6, gens, 20);
  const auto pairs = yz_pairs(pts);
  for (auto [y, z] : std::vector<std::pair<int, int>>{{1, 3}, {1, -3}, {3, -1}, {3, 7}, {13, 9}, {15, -13}}) {
    EXPECT_TRUE(pairs.count({y, z})) << y << "," << z;
    EXPECT_TRUE(pairs.count({-y, -z})) << -y << "," << -z;
  }
}

// The twelve bound-2 theta automorphs move (4,1,3) to exactly these pairs.
TEST(Orbit, TwelveImagesOfSeed) {
  std::set<std::pair<std::int64_t, std::int64_t>> got;
  for (const auto& t : enumerate_theta_group(2)) {
    const Solution3 v = map_theta_to_automorph(t) * Solution3{4, 1, 3};
    got.emplace(to_int64(v.y), to_int64(v.z));
  }
  std::set<std::pair<std::int64_t, std::int64_t>> want;
  for (auto [y, z] : std::vector<std::pair<int, int>>{{1, 3}, {1, -3}, {3, -1}, {3, 7}, {13, 9}, {15, -13}}) {
    want.emplace(y, z);
    want.emplace(-y, -z);
  }
  EXPECT_EQ(got, want);
}

TEST(Orbit, EmptyGeneratorsGiveSymmetryImages) {
  const auto pts = orbit({4, 1, 3}, 1, 6, {}, 100);
  EXPECT_EQ(pts.size(), 8u);
  EXPECT_THROW(orbit({4, 1, 2}, 1, 6, {}, 100), std::invalid_argument);
  EXPECT_THROW(orbit({4, 1, 3}, 1, 6, {Matrix3::diagonal(1, 1, -1)}, 100), std::invalid_argument);
}

struct OrbitCase {
  int D, rhs;
  Solution3 seed;
  int gen_bound, x_bound;
  std::size_t expected;
};

// The orbit restricted to a window equals the brute-force point set there.
TEST(Orbit, MatchesBruteForce) {
  const std::vector<OrbitCase> cases{{1, 6, {4, 1, 3}, 2, 20, 40},  {1, 6, {4, 1, 3}, 2, 60, 96},
                                     {1, 6, {4, 1, 3}, 1, 60, 96},  {2, 3, {2, 1, 2}, 2, 20, 64},
                                     {2, 3, {2, 1, 2}, 2, 60, 192}};
  for (const auto& c : cases) {
    const auto pts = orbit(c.seed, c.D, c.rhs, automorphs_of(enumerate_gamma(c.D, c.gen_bound), c.D), c.x_bound);
    const auto want = brute_form_points(c.D, c.rhs, c.x_bound);
    EXPECT_EQ(std::set<Solution3>(pts.begin(), pts.end()), want) << c.D << " " << c.x_bound;
    EXPECT_EQ(pts.size(), c.expected) << c.D << " " << c.x_bound;
  }
}

TEST(Orbit, D2Contains2dExample) {
  const auto pts = orbit({2, 1, 2}, 2, 3, automorphs_of(enumerate_gamma(2, 2), 2), 20);
  const auto pairs = yz_pairs(pts);
  for (auto [y, z] : std::vector<std::pair<int, int>>{{1, 2}, {2, 5}, {2, 11}, {5, 10}}) {
    EXPECT_TRUE(pairs.count({y, z}));
    EXPECT_TRUE(pairs.count({z, -y}));
  }
}

TEST(Orbit, ClosedUnderOneMoreStep) {
  const auto gens = automorphs_of(enumerate_gamma(2, 2), 2);
  const auto pts = orbit({2, 1, 2}, 2, 3, gens, 40);
  const std::set<Solution3> s(pts.begin(), pts.end());
  for (const auto& v : pts) {
    for (const auto& A : gens) {
      Solution3 w = A * v;
      if (w.x < 0) w = {-w.x, -w.y, -w.z};
      if (w.x <= 40) ASSERT_TRUE(s.count(w));
    }
  }
}

TEST(PowerToIdentity, Basics) {
  const Matrix3 I = Matrix3::identity();
  EXPECT_EQ(power_to_identity_mod(I, 7).order, 1u);
  const auto gens = automorphs_of(enumerate_gamma(2, 1), 2);
  for (const auto& A : gens) EXPECT_EQ(power_to_identity_mod(A, 1).order, 1u);
  for (const auto& A : automorphs_of(enumerate_gamma(2, 2), 2)) {
    const PowerOrder po = power_to_identity_mod(A, 3);
    ASSERT_FALSE(po.capped);
    // Independent check: A^N mod 3 is the identity and no smaller power is.
    Matrix3 P = I;
    for (std::uint64_t n = 1; n <= po.order; ++n) {
      P = P * A;
      bool ident = true;
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
          BigInt e = P(i, j) % 3;
          if (e < 0) e += 3;
          ident = ident && e == (i == j ? 1 : 0);
        }
      ASSERT_EQ(ident, n == po.order);
    }
  }
  EXPECT_THROW(power_to_identity_mod(I, 0), std::invalid_argument);
}
