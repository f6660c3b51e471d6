#include <gtest/gtest.h>

#include <cmath>
#include <map>

#include "bupp/dist.hpp"
#include "bupp/error.hpp"
#include "bupp/instances.hpp"
#include "bupp/learn.hpp"

using namespace bupp;

namespace {

Rational q(long a, long b) { return ratio(a, b); }

DiscreteDist half_point() { return DiscreteDist::point_mass(4, 2); }

}  // namespace

TEST(Rational, ParsesFractionsAndDecimalsExactly) {
  EXPECT_EQ(parse_rational("3"), Rational(3));
  EXPECT_EQ(parse_rational("-3/4"), q(-3, 4));
  EXPECT_EQ(parse_rational("0.125"), q(1, 8));
  EXPECT_EQ(parse_rational("1e-2"), q(1, 100));
  EXPECT_EQ(parse_rational("0.1"), q(1, 10));
  EXPECT_EQ(parse_rational("6/8"), q(3, 4));
  EXPECT_THROW(parse_rational("1/0"), InvalidInput);
  EXPECT_THROW(parse_rational("abc"), InvalidInput);
  EXPECT_THROW(parse_rational(""), InvalidInput);
}

TEST(Rational, TicksAndLcm) {
  std::int64_t t = -1;
  EXPECT_TRUE(to_ticks(q(3, 4), 8, t));
  EXPECT_EQ(t, 6);
  EXPECT_FALSE(to_ticks(q(1, 3), 8, t));
  EXPECT_EQ(checked_lcm(4, 6), 12);
  EXPECT_EQ(to_string(q(6, 8)), "3/4");
  EXPECT_EQ(to_string(Rational(2)), "2");
}

TEST(MakeDiscrete, DegenerateAndBaseG) {
  auto d = make_discrete(1, {0}, {Rational(1)});
  EXPECT_EQ(d.size(), 1u);
  EXPECT_EQ(d.cdf(0), 1);

  auto g = make_discrete(2, {0, 1, 2}, {1 - q(15, 100), q(1, 10), q(5, 100)});
  EXPECT_EQ(g, base_G(10));
}

TEST(MakeDiscrete, RejectsBadInput) {
  EXPECT_THROW(make_discrete(2, {0, 1}, {q(1, 2), q(4, 10)}), InvalidInput);   // sums to 0.9
  EXPECT_THROW(make_discrete(2, {0, 3}, {q(1, 2), q(1, 2)}), InvalidInput);    // value > 1
  EXPECT_THROW(make_discrete(2, {1, 1}, {q(1, 2), q(1, 2)}), InvalidInput);    // duplicate
  EXPECT_THROW(make_discrete(2, {0, 1}, {q(3, 2), q(-1, 2)}), InvalidInput);   // negative
  EXPECT_THROW(make_discrete(2, {0}, {q(1, 2), q(1, 2)}), InvalidInput);       // lengths
}

TEST(MakeDiscrete, SortsAndDropsZeroMasses) {
  auto d = make_discrete(4, {3, 0, 2}, {q(1, 2), Rational(0), q(1, 2)});
  ASSERT_EQ(d.size(), 2u);
  EXPECT_EQ(d.support()[0], 2);
  EXPECT_EQ(d.support()[1], 3);
}

TEST(Cdf, PointMassAndBaseG) {
  auto d = half_point();
  EXPECT_EQ(cdf(d, LatticeValue{2, 4}), 1);
  EXPECT_EQ(cdf(d, LatticeValue{1, 4}), 0);
  EXPECT_EQ(cdf_left(d, LatticeValue{2, 4}), 0);
  EXPECT_EQ(cdf_left(d, LatticeValue{3, 4}), 1);
  EXPECT_EQ(base_G(10).cdf(1), q(95, 100));
  EXPECT_THROW(cdf(d, LatticeValue{1, 2}), LatticeMismatch);
}

TEST(Cdf, LeftLimitDifferenceIsPointMass) {
  SeededRng rng(5);
  for (int rep = 0; rep < 50; ++rep) {
    auto d = random_product(1, 12, 6, rng)[0];
    Rational prev = 0;
    for (std::int64_t t = 0; t <= 12; ++t) {
      EXPECT_EQ(d.cdf(t) - d.cdf_left(t), d.mass_at(t));
      EXPECT_LE(d.cdf_left(t), d.cdf(t));
      EXPECT_GE(d.cdf(t), prev);
      prev = d.cdf(t);
    }
    EXPECT_EQ(d.cdf(12), 1);
  }
}

TEST(Sample, PointMassAndDeterminism) {
  SeededRng a(9), b(9);
  auto d = half_point();
  for (int i = 0; i < 100; ++i) EXPECT_EQ(sample(d, a), 2);
  auto g = base_G(10);
  SeededRng c(9);
  for (int i = 0; i < 1000; ++i) EXPECT_EQ(g.sample(b), g.sample(c));
}

TEST(Sample, FrequencyOfTopValue) {
  const int n = 10, draws = 1'000'000;
  auto g = base_G(n);
  SeededRng rng(123);
  int top = 0;
  for (int i = 0; i < draws; ++i) top += g.sample(rng) == 2;
  double p = 0.5 / n, sigma = std::sqrt(p * (1 - p) / draws);
  EXPECT_NEAR(static_cast<double>(top) / draws, p, 5 * sigma);
}

TEST(Empirical, ExactMasses) {
  std::vector<std::int64_t> v{2, 2};
  EXPECT_EQ(empirical_from_values(4, v), half_point());
  std::vector<std::int64_t> w{0, 1};
  auto e = empirical_from_values(1, w);
  EXPECT_EQ(e.mass_at(0), q(1, 2));
  EXPECT_EQ(e.mass_at(1), q(1, 2));
  EXPECT_THROW(empirical_from_values(1, std::vector<std::int64_t>{}), InvalidInput);
}

TEST(Empirical, ConvergesInKolmogorov) {
  SeededRng rng(77);
  auto d = random_product(1, 10, 5, rng)[0];
  std::vector<std::int64_t> v(100'000);
  for (auto& x : v) x = d.sample(rng);
  EXPECT_LE(kolmogorov(d, empirical_from_values(10, v)).get_d(), 0.02);
}

TEST(Discretize, IdentityOnGridAndFloors) {
  // eps = 1/2: grid cells of width 1/4
  auto on_grid = make_discrete(4, {1, 3}, {q(1, 2), q(1, 2)});
  EXPECT_EQ(discretize(on_grid, q(1, 2)), on_grid);
  auto d = DiscreteDist::point_mass(100, 37);
  auto t = discretize(d, q(1, 2));
  EXPECT_EQ(t.support()[0] * 4, t.lattice());  // value 1/4
  EXPECT_EQ(t.lattice(), 100);
  EXPECT_EQ(discretization_cells(q(1, 8)), 64);
  EXPECT_EQ(discretization_cells(q(1, 10)), 100);
}

TEST(Discretize, IsDominatedByInput) {
  SeededRng rng(4);
  for (int rep = 0; rep < 100; ++rep) {
    auto d = random_product(1, 30, 8, rng)[0];
    auto t = discretize(d, q(1, 3));
    auto a = d.refined(t.lattice());
    EXPECT_TRUE(dominates(a, t));
    // each output mass equals the input mass of its cell [t eps^2, (t+1) eps^2)
    const std::int64_t width = t.lattice() / 9;
    for (std::int64_t c = 0; c < 9; ++c) {
      Rational in = a.cdf_left((c + 1) * width) - a.cdf_left(c * width);
      EXPECT_EQ(t.mass_at(c * width), in);
    }
  }
}

TEST(Distances, KolmogorovAndTv) {
  auto zero = DiscreteDist::point_mass(1, 0), one = DiscreteDist::point_mass(1, 1);
  auto mix = make_discrete(1, {0, 1}, {q(1, 2), q(1, 2)});
  EXPECT_EQ(kolmogorov(mix, mix), 0);
  EXPECT_EQ(kolmogorov(zero, one), 1);
  EXPECT_EQ(kolmogorov(mix, one), q(1, 2));
  EXPECT_EQ(tv_distance(mix, mix), 0);
  EXPECT_EQ(tv_distance(zero, one), 1);
  EXPECT_THROW(kolmogorov(zero, half_point()), LatticeMismatch);
}

TEST(Distances, TvIsHalfL1AndDominatesKolmogorov) {
  SeededRng rng(8);
  for (int rep = 0; rep < 200; ++rep) {
    auto d = random_product(1, 8, 5, rng)[0], e = random_product(1, 8, 5, rng)[0];
    Rational l1 = 0;
    for (std::int64_t t = 0; t <= 8; ++t) l1 += abs(Rational(d.mass_at(t) - e.mass_at(t)));
    EXPECT_EQ(tv_distance(d, e), l1 / 2);
    EXPECT_GE(tv_distance(d, e), kolmogorov(d, e));
    EXPECT_EQ(kolmogorov(d, e), kolmogorov(e, d));
  }
}

TEST(Distances, Hellinger) {
  auto zero = DiscreteDist::point_mass(1, 0), one = DiscreteDist::point_mass(1, 1);
  EXPECT_EQ(hellinger_sq(zero, zero), 0.0);
  EXPECT_NEAR(hellinger_sq(zero, one), 1.0, 1e-12);
  // reference value from an independent float computation
  EXPECT_NEAR(hellinger_sq(base_G(100), perturbed_GL(100, q(1, 10))), 3.977556329890515e-05, 1e-12);
}

TEST(Distances, HellingerInequalitiesOnRandomPairs) {
  SeededRng rng(10);
  for (int rep = 0; rep < 1000; ++rep) {
    auto d = random_product(1, 6, 4, rng)[0], e = random_product(1, 6, 4, rng)[0],
         f = random_product(1, 6, 4, rng)[0];
    double h = hellinger_sq(d, e);
    EXPECT_GE(h, 0.0);
    EXPECT_LE(h, 1.0 + 1e-12);
    EXPECT_LE(tv_distance(d, e).get_d(), std::sqrt(2.0) * std::sqrt(h) + 1e-9);
    EXPECT_LE(std::sqrt(hellinger_sq(d, f)), std::sqrt(h) + std::sqrt(hellinger_sq(e, f)) + 1e-9);
  }
}

TEST(Distances, HellingerProduct) {
  auto g = base_G(100), gl = perturbed_GL(100, q(1, 10));
  std::vector<std::pair<DiscreteDist, DiscreteDist>> one{{g, gl}};
  EXPECT_NEAR(hellinger_sq_product(one), hellinger_sq(g, gl), 1e-15);
  std::vector<std::pair<DiscreteDist, DiscreteDist>> two{{g, gl}, {g, g}};
  EXPECT_NEAR(hellinger_sq_product(two), hellinger_sq(g, gl), 1e-15);
  EXPECT_LE(hellinger_sq(g, gl), 3 * 0.01 / 100);
  std::vector<std::pair<DiscreteDist, DiscreteDist>> none;
  EXPECT_THROW(hellinger_sq_product(none), InvalidInput);
}

TEST(Dominates, Directions) {
  auto zero = DiscreteDist::point_mass(2, 0), one = DiscreteDist::point_mass(2, 2);
  EXPECT_TRUE(dominates(one, one));
  EXPECT_TRUE(dominates(one, zero));
  EXPECT_FALSE(dominates(zero, one));
  EXPECT_TRUE(dominates(base_G(10), perturbed_GL(10, q(1, 10))));
}

TEST(BreveShift, PointMassAtOne) {
  auto one = DiscreteDist::point_mass(4, 4);
  const double gamma = 0.01;
  auto s = breve_shift(one, gamma);
  for (std::int64_t t = 0; t < 4; ++t) EXPECT_NEAR(s.cdf(t).get_d(), gamma, 1e-15);
  EXPECT_EQ(s.cdf(4), 1);
  EXPECT_THROW(breve_shift(one, 0.0), InvalidInput);
  EXPECT_THROW(breve_shift(one, 1.0), InvalidInput);
}

TEST(BreveShift, DominatedAndClose) {
  SeededRng rng(12);
  for (int rep = 0; rep < 100; ++rep) {
    auto d = random_product(1, 10, 6, rng)[0];
    const double gamma = 1e-4;
    auto s = breve_shift(d, gamma);
    EXPECT_TRUE(dominates(d, s));
    for (std::int64_t t = 0; t <= 10; ++t)
      EXPECT_LE(Rational(s.cdf(t) - d.cdf(t)).get_d(), gamma + std::sqrt(gamma / 2) + 1e-12);
  }
}

TEST(FromCdf, RoundTrip) {
  SeededRng rng(13);
  auto d = random_product(1, 7, 5, rng)[0];
  std::vector<Rational> f;
  for (std::int64_t t = 0; t <= 7; ++t) f.push_back(d.cdf(t));
  EXPECT_EQ(from_cdf_values(7, f), d);
  f[3] = 2;
  EXPECT_THROW(from_cdf_values(7, f), InvalidInput);
}
