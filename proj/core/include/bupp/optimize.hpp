#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "bupp/dist.hpp"
#include "bupp/rational.hpp"
#include "bupp/revenue.hpp"
#include "bupp/rng.hpp"

namespace bupp {

/// Sorted, duplicate-free set of candidate prices in [0, 1].
class PriceGrid {
 public:
  explicit PriceGrid(std::vector<Rational> prices);

  /// Multiples of 1/ceil(eps^-2): the discretization grid.
  static PriceGrid multiples_of_eps_sq(const Rational& eps);
  /// Every point of the lattice {0, 1/L, ..., 1}.
  static PriceGrid lattice_points(std::int64_t lattice);

  std::size_t size() const { return prices_.size(); }
  const std::vector<Rational>& prices() const { return prices_; }

  /// Smallest lattice on which every grid price is representable.
  std::int64_t natural_lattice() const;
  /// Grid prices as ticks on `lattice` (throws InvalidInput if not representable).
  std::vector<std::int64_t> ticks_on(std::int64_t lattice) const;

 private:
  std::vector<Rational> prices_;
};

struct PricingResult {
  PriceVector prices;
  Rational revenue;
};

struct SearchLimits {
  std::uint64_t max_vectors = 10'000'000;
  unsigned threads = 1;
};

/// Exact revenue maximizer over grid^n; ties go to the lexicographically
/// smallest price vector. The distribution is refined when the grid needs a
/// finer lattice, so the result lives on lcm(L, grid lattice).
PricingResult optimal_bruteforce(const ProductDist& d, const PriceGrid& grid,
                                 SearchLimits limits = {});

/// Revenue of the vector pricing the first q*n items at 1/2 and the rest at 1
/// on n i.i.d. copies of the base distribution {1: 0.5/n, 1/2: 1/n, 0: 1-1.5/n}.
/// Evaluated in exact product form; q*n must be an integer.
Rational two_price_revenue(std::int64_t n, const Rational& q);

struct TwoPriceOptimum {
  Rational q;  // fraction of items priced at 1/2
  Rational revenue;
};

/// Exact argmax of two_price_revenue over q in {0, 1/n, ..., 1}; ties go to
/// the smallest q.
TwoPriceOptimum optimal_two_price(std::int64_t n);

/// Multi-start coordinate ascent: every coordinate is re-optimized by an
/// exact scan of the grid until a full sweep brings no strict improvement.
PricingResult coordinate_ascent(const ProductDist& d, const PriceGrid& grid, std::size_t starts,
                                SeededRng& rng);

/// Maximizes exante_rev over grid^n. When the per-item monopoly prices leave
/// the unit budget slack they are returned directly; otherwise falls back to
/// exhaustive search.
PricingResult exante_optimal(const ProductDist& d, const PriceGrid& grid,
                             SearchLimits limits = {});

/// Pluggable optimizer used by the learners.
using Optimizer = std::function<PricingResult(const ProductDist&)>;

Optimizer bruteforce_optimizer(PriceGrid grid, SearchLimits limits = {});
Optimizer coordinate_optimizer(PriceGrid grid, std::size_t starts, std::uint64_t seed);

}  // namespace bupp
