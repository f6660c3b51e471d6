#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "bupp/dist.hpp"
#include "bupp/optimize.hpp"
#include "bupp/rational.hpp"
#include "bupp/revenue.hpp"
#include "bupp/rng.hpp"

namespace bupp {

/// {1: 0.5/n, 1/2: 1/n, 0: 1 - 1.5/n} on lattice 2.
DiscreteDist base_G(std::int64_t n);

/// {1: (0.5 - eps)/n, 1/2: (1 + eps)/n, 0: 1 - 1.5/n} on lattice 2; 0 <= eps < 1/2.
DiscreteDist perturbed_GL(std::int64_t n, const Rational& eps);

struct ItemPair {
  std::size_t first;
  std::size_t second;
  std::size_t low;  // whichever of first/second carries G^L
};

struct SampleHardInstance {
  ProductDist dist;
  std::vector<ItemPair> pairs;
  std::int64_t n;
  Rational eps;
  Rational q_star_n;

  /// Every G^L at 1/2, everything else at 1 (lattice 2).
  PriceVector intended_prices() const;
};

/// Pairs (0,1), (2,3), ... up to q*_n n pairs (clamped to [1, n/2]); one member
/// of each pair, chosen by a fair coin, gets G^L. Remaining items get G.
SampleHardInstance make_sample_hard(std::int64_t n, const Rational& eps, SeededRng& rng);

/// Same with an explicit pair count (skips the q*_n computation).
SampleHardInstance make_sample_hard(std::int64_t n, const Rational& eps, std::size_t pairs,
                                    SeededRng& rng);

/// Prices {1/2, 1}.
PriceGrid sample_hard_grid();

/// Equal-revenue distribution on {0} u {1/2 + k eps : k = 0..1/(4 eps)}:
/// Pr[X >= 1/2 + k eps] = 1 / (2n (1/2 + k eps)). Lattice 1/eps; eps = 1/(4m).
DiscreteDist equal_revenue_H(std::int64_t n, const Rational& eps);

struct QueryHardInstance {
  ProductDist dist;
  std::vector<std::int64_t> hidden_k;
  std::int64_t n;
  Rational eps;

  /// p*_i = 1/2 + (k_i + 1) eps.
  PriceVector optimal_prices() const;
};

/// equal_revenue_H per item with the mass at 1/2 + k_i eps moved one eps
/// step up, k_i uniform on {0, ..., 1/(4 eps) - 1}.
QueryHardInstance make_query_hard(std::int64_t n, const Rational& eps, SeededRng& rng);
QueryHardInstance make_query_hard(std::int64_t n, const Rational& eps,
                                  std::vector<std::int64_t> hidden_k);

/// Prices {1/2 + k eps : k = 0..1/(4 eps)}.
PriceGrid query_hard_grid(const Rational& eps);

struct NonMonotonicityExample {
  ProductDist original;   // {A, B}
  ProductDist dominating; // {A~, B}
};

/// A = point mass 1/2, A~ = {0.6: 0.1, 0.5: 0.9}, B = {1: 1/2, 0: 1/2}; lattice 10.
NonMonotonicityExample nonmonotonicity_example();

/// Random product distribution: support sizes in [1, max_support] on `lattice`,
/// integer weights normalized exactly.
ProductDist random_product(std::size_t n, std::int64_t lattice, std::size_t max_support,
                           SeededRng& rng);

/// Maximum-likelihood orientation guess for every pair from `samples`
/// vector draws; returns the fraction of pairs guessed wrong. Ties are
/// broken by a fair coin.
double misidentified_pair_fraction(const SampleHardInstance& inst, std::uint64_t samples,
                                   SeededRng& rng);

}  // namespace bupp
