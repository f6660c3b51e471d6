#include <gtest/gtest.h>

#include "bupp/error.hpp"
#include "bupp/instances.hpp"

using namespace bupp;

namespace {

Rational q(long a, long b) { return ratio(a, b); }

Rational big(const char* num, const char* den) { return Rational(mpz_class(num), mpz_class(den)); }

// G^L on the first member of the first `pairs` pairs, G elsewhere.
ProductDist low_first(std::int64_t n, const Rational& eps, std::int64_t pairs) {
  std::vector<DiscreteDist> items(static_cast<std::size_t>(n), base_G(n));
  for (std::int64_t j = 0; j < pairs; ++j) items[static_cast<std::size_t>(2 * j)] = perturbed_GL(n, eps);
  return ProductDist(items);
}

}  // namespace

TEST(BaseG, Masses) {
  auto g = base_G(10);
  EXPECT_EQ(g.lattice(), 2);
  EXPECT_EQ(g.mass_at(2), q(1, 20));
  EXPECT_EQ(g.mass_at(1), q(1, 10));
  EXPECT_EQ(g.mass_at(0), q(17, 20));
  EXPECT_THROW(base_G(1), InvalidInput);
}

TEST(PerturbedGL, MassesAndCloseness) {
  auto gl = perturbed_GL(10, q(1, 10));
  EXPECT_EQ(gl.mass_at(2), q(4, 100));
  EXPECT_EQ(gl.mass_at(1), q(11, 100));
  EXPECT_EQ(gl.mass_at(0), q(17, 20));
  EXPECT_EQ(perturbed_GL(10, 0).masses()[0], base_G(10).masses()[0]);
  EXPECT_THROW(perturbed_GL(10, q(1, 2)), InvalidInput);
  // reference value from an independent float evaluation
  EXPECT_NEAR(hellinger_sq(base_G(100), perturbed_GL(100, q(1, 10))), 3.977556329890515e-05, 1e-15);
  EXPECT_LE(hellinger_sq(base_G(100), perturbed_GL(100, q(1, 10))), 3 * 0.01 / 100);
}

TEST(SampleHard, Structure) {
  SeededRng rng(1);
  auto inst = make_sample_hard(8, q(1, 10), rng);
  EXPECT_EQ(inst.q_star_n, q(1, 2));
  ASSERT_EQ(inst.pairs.size(), 4u);
  for (std::size_t j = 0; j < inst.pairs.size(); ++j) {
    const auto& p = inst.pairs[j];
    EXPECT_EQ(p.first, 2 * j);
    EXPECT_EQ(p.second, 2 * j + 1);
    EXPECT_TRUE(p.low == p.first || p.low == p.second);
    std::size_t high = p.low == p.first ? p.second : p.first;
    EXPECT_EQ(inst.dist[p.low].masses()[1], perturbed_GL(8, q(1, 10)).masses()[1]);
    EXPECT_EQ(inst.dist[high].masses()[1], base_G(8).masses()[1]);
  }
  auto p = inst.intended_prices();
  for (const auto& pr : inst.pairs) {
    EXPECT_EQ(p.price(pr.low), q(1, 2));
    EXPECT_EQ(p.price(pr.low == pr.first ? pr.second : pr.first), 1);
  }
}

TEST(SampleHard, PairCountFollowsTwoPriceOptimum) {
  SeededRng rng(2);
  auto inst = make_sample_hard(100, q(1, 10), rng);
  EXPECT_EQ(inst.q_star_n, q(39, 100));
  EXPECT_EQ(inst.pairs.size(), 39u);
  EXPECT_EQ(make_sample_hard(8, q(1, 10), 3, rng).pairs.size(), 3u);
  EXPECT_THROW(make_sample_hard(8, q(1, 10), 5, rng), InvalidInput);
}

TEST(SampleHard, OrientationIsAFairCoin) {
  SeededRng rng(3);
  int low_first_count = 0, total = 0;
  for (int rep = 0; rep < 200; ++rep) {
    auto inst = make_sample_hard(100, q(1, 10), rng);
    for (const auto& p : inst.pairs) {
      low_first_count += p.low == p.first;
      ++total;
    }
  }
  double f = static_cast<double>(low_first_count) / total;
  EXPECT_NEAR(f, 0.5, 5 * 0.5 / std::sqrt(static_cast<double>(total)));
}

TEST(SampleHard, FrozenRevenues) {
  // reference values from an exact joint enumeration
  auto three = low_first(8, q(1, 10), 3);
  PriceVector good(2, {1, 2, 1, 2, 1, 2, 2, 2});
  PriceVector swapped(2, {2, 1, 1, 2, 1, 2, 2, 2});
  EXPECT_EQ(rev(three, good), big("455279850801", "1073741824000"));
  EXPECT_EQ(rev(three, good) - rev(three, swapped), big("8837153101", "1073741824000"));
  EXPECT_EQ(optimal_bruteforce(three, sample_hard_grid()).prices, good);

  auto four = low_first(8, q(1, 10), 4);
  auto best = optimal_bruteforce(four, sample_hard_grid());
  EXPECT_EQ(best.prices, PriceVector(2, {1, 2, 1, 2, 1, 2, 1, 2}));
  EXPECT_EQ(best.revenue, big("2278130075711", "5368709120000"));
}

TEST(SampleHard, IntendedPricesOptimalForAnyOrientation) {
  SeededRng rng(4);
  for (int rep = 0; rep < 5; ++rep) {
    auto inst = make_sample_hard(8, q(1, 10), rng);
    auto best = optimal_bruteforce(inst.dist, sample_hard_grid());
    EXPECT_EQ(best.prices, inst.intended_prices());
  }
}

TEST(SampleHard, FewSamplesMisidentifyPairs) {
  SeededRng rng(5);
  auto inst = make_sample_hard(8, q(1, 10), rng);
  double few = 0, many = 0;
  for (int rep = 0; rep < 50; ++rep) {
    few += misidentified_pair_fraction(inst, 8, rng);
    many += misidentified_pair_fraction(inst, 1'000'000, rng);
  }
  EXPECT_GT(few / 50, 0.2);
  EXPECT_LT(many / 50, 0.05);
}

TEST(EqualRevenue, FrozenMasses) {
  // reference values from exact rational arithmetic
  auto h = equal_revenue_H(4, q(1, 16));
  EXPECT_EQ(h.lattice(), 16);
  EXPECT_EQ(h.mass_at(0), q(3, 4));
  EXPECT_EQ(h.mass_at(8), q(1, 36));
  EXPECT_EQ(h.mass_at(9), q(1, 45));
  EXPECT_EQ(h.mass_at(10), q(1, 55));
  EXPECT_EQ(h.mass_at(11), q(1, 66));
  EXPECT_EQ(h.mass_at(12), q(1, 6));
  EXPECT_EQ(h.size(), 6u);
  EXPECT_THROW(equal_revenue_H(4, q(1, 10)), InvalidInput);
}

TEST(EqualRevenue, ConstantRevenueCurve) {
  for (std::int64_t n : {2, 4, 16}) {
    for (auto eps : {q(1, 8), q(1, 32)}) {
      auto h = equal_revenue_H(n, eps);
      for (const auto& p : std::vector<Rational>(query_hard_grid(eps).prices())) EXPECT_EQ(p * h.prob_at_least(p), q(1, 2 * n));
    }
  }
}

TEST(QueryHard, PerturbationMovesOneStep) {
  const auto eps = q(1, 16);
  auto inst = make_query_hard(2, eps, std::vector<std::int64_t>{0, 2});
  auto h = equal_revenue_H(2, eps);
  EXPECT_EQ(inst.dist[0].mass_at(8), 0);
  EXPECT_EQ(inst.dist[0].mass_at(9), h.mass_at(8) + h.mass_at(9));
  EXPECT_EQ(inst.dist[1].mass_at(10), 0);
  EXPECT_EQ(inst.dist[1].mass_at(11), h.mass_at(10) + h.mass_at(11));
  EXPECT_EQ(inst.optimal_prices(), PriceVector(16, {9, 11}));
  // only the perturbed price earns more than 1/(2n)
  for (const auto& p : std::vector<Rational>(query_hard_grid(eps).prices())) {
    Rational r = p * inst.dist[1].prob_at_least(p);
    if (p == q(11, 16))
      EXPECT_GT(r, q(1, 4));
    else
      EXPECT_EQ(r, q(1, 4));
  }
  EXPECT_THROW(make_query_hard(2, eps, std::vector<std::int64_t>{0, 4}), InvalidInput);
  EXPECT_THROW(make_query_hard(2, eps, std::vector<std::int64_t>{0}), InvalidInput);
}

TEST(QueryHard, HiddenIndicesUniform) {
  SeededRng rng(6);
  std::vector<int> counts(4, 0);
  for (int rep = 0; rep < 1000; ++rep) {
    auto inst = make_query_hard(4, q(1, 16), rng);
    for (auto k : inst.hidden_k) ++counts[static_cast<std::size_t>(k)];
  }
  for (int c : counts) EXPECT_NEAR(c, 1000, 150);
}

TEST(NonMonotonicity, Example) {
  auto ex = nonmonotonicity_example();
  EXPECT_EQ(ex.original.lattice(), 10);
  EXPECT_EQ(ex.original[0].mass_at(5), 1);
  EXPECT_EQ(ex.dominating[0].mass_at(6), q(1, 10));
  EXPECT_EQ(ex.dominating[1].mass_at(10), q(1, 2));
  EXPECT_TRUE(dominates(ex.dominating[0], ex.original[0]));
}

TEST(RandomProduct, ValidAndReproducible) {
  SeededRng a(7), b(7);
  auto d = random_product(5, 12, 4, a);
  auto e = random_product(5, 12, 4, b);
  ASSERT_EQ(d.size(), 5u);
  for (std::size_t i = 0; i < d.size(); ++i) {
    EXPECT_GE(d[i].size(), 1u);
    EXPECT_LE(d[i].size(), 4u);
    Rational s = 0;
    for (const auto& m : d[i].masses()) s += m;
    EXPECT_EQ(s, 1);
    EXPECT_EQ(std::vector<std::int64_t>(d[i].support().begin(), d[i].support().end()),
              std::vector<std::int64_t>(e[i].support().begin(), e[i].support().end()));
  }
}
