#pragma once

#include <cstdint>
#include <vector>

#include "bupp/dist.hpp"
#include "bupp/rational.hpp"
#include "bupp/rng.hpp"

namespace bupp {

/// One posted price per item, as ticks on a shared lattice.
class PriceVector {
 public:
  PriceVector(std::int64_t lattice, std::vector<std::int64_t> ticks);

  /// Converts exact rational prices onto `lattice`; throws InvalidInput when a
  /// price is not representable or lies outside [0, 1].
  static PriceVector from_rationals(std::int64_t lattice, const std::vector<Rational>& prices);

  std::size_t size() const { return ticks_.size(); }
  std::int64_t lattice() const { return lattice_; }
  std::int64_t operator[](std::size_t i) const { return ticks_[i]; }
  const std::vector<std::int64_t>& ticks() const { return ticks_; }
  Rational price(std::size_t i) const { return ratio(ticks_[i], lattice_); }
  std::vector<Rational> prices() const;

  PriceVector refined(std::int64_t new_lattice) const;

  friend bool operator==(const PriceVector&, const PriceVector&) = default;
  friend auto operator<=>(const PriceVector& a, const PriceVector& b) {
    return a.ticks_ <=> b.ticks_;
  }

 private:
  std::int64_t lattice_;
  std::vector<std::int64_t> ticks_;
};

/// Per-item probability of being the buyer's pick, plus no-purchase.
struct WinProfile {
  std::vector<Rational> win;
  Rational no_purchase;
};

/// Unit-demand buyer's choice for realized values (ticks on a common lattice):
/// the item with maximal utility v_i - p_i >= 0; ties go to the higher price,
/// then to the higher index. Returns -1 when nothing is bought.
int buyer_choice(const std::vector<std::int64_t>& values, const PriceVector& p);

/// Exact win probabilities via the utility decomposition: item i with utility
/// theta wins iff lower-ranked items have utility <= theta and higher-ranked
/// items have utility < theta (rank = price ascending, then index).
WinProfile win_probabilities(const ProductDist& d, const PriceVector& p);

/// Exact expected revenue sum_i p_i P_i.
Rational rev(const ProductDist& d, const PriceVector& p);

/// Independent oracle: enumerates the joint support (at most max_outcomes).
Rational rev_bruteforce(const ProductDist& d, const PriceVector& p,
                        std::uint64_t max_outcomes = 1'000'000);

struct MonteCarloEstimate {
  double mean = 0.0;
  double std_error = 0.0;
};

MonteCarloEstimate rev_monte_carlo(const ProductDist& d, const PriceVector& p,
                                   std::uint64_t trials, SeededRng& rng);

/// Ex-ante revenue: max sum q_i p_i s.t. sum q_i <= 1, q_i <= Pr[v_i >= p_i],
/// solved by the greedy fractional rule (highest prices first).
Rational exante_rev(const ProductDist& d, const PriceVector& p);

/// Brings a distribution and a price vector to their least common lattice.
struct Aligned {
  ProductDist dist;
  PriceVector prices;
};
Aligned align(const ProductDist& d, const PriceVector& p);

/// rev() after aligning lattices.
Rational rev_aligned(const ProductDist& d, const PriceVector& p);

/// Left side of the sum-integral inequality:
/// sum_i sum_{theta : S_i(theta) < beta} Pr[v_i = p_i + theta], where
/// S_i(theta) = sum_{rank j <= rank i} (1 - F_j(p_j + theta))
///            + sum_{rank j >  rank i} (1 - F_j((p_j + theta)^-)).
Rational sum_integral_lhs(const ProductDist& d, const PriceVector& p, const Rational& beta);

}  // namespace bupp
