#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "bupp/rational.hpp"
#include "bupp/rng.hpp"

namespace bupp {

/// A point ticks / lattice of the value lattice in [0, 1].
struct LatticeValue {
  std::int64_t ticks = 0;
  std::int64_t lattice = 1;

  Rational value() const { return ratio(ticks, lattice); }
  friend bool operator==(const LatticeValue&, const LatticeValue&) = default;
};

/// Single-item value distribution with exact point masses on the lattice
/// {0, 1/L, ..., 1}. Support is strictly increasing and every stored mass is
/// positive; masses sum to exactly one. Immutable after construction.
class DiscreteDist {
 public:
  /// Validates and normalizes: sorts by value, drops zero masses.
  /// Throws InvalidInput on length mismatch, out-of-range or duplicate
  /// values, negative masses, or masses not summing to 1.
  DiscreteDist(std::int64_t lattice, std::vector<std::int64_t> support,
               std::vector<Rational> masses);

  static DiscreteDist point_mass(std::int64_t lattice, std::int64_t ticks);

  std::int64_t lattice() const { return lattice_; }
  std::size_t size() const { return support_.size(); }
  std::span<const std::int64_t> support() const { return support_; }
  std::span<const Rational> masses() const { return masses_; }

  /// Pr[X <= ticks / L]. Ticks outside [0, L] are allowed: below 0 gives 0,
  /// above L gives 1.
  const Rational& cdf(std::int64_t ticks) const;
  /// Pr[X < ticks / L].
  const Rational& cdf_left(std::int64_t ticks) const;
  Rational mass_at(std::int64_t ticks) const;

  /// Pr[X >= price] for an arbitrary rational price.
  Rational prob_at_least(const Rational& price) const;

  std::int64_t sample(SeededRng& rng) const;

  /// Same distribution expressed on a finer lattice (multiple of lattice()).
  DiscreteDist refined(std::int64_t new_lattice) const;

  friend bool operator==(const DiscreteDist& a, const DiscreteDist& b) {
    return a.lattice_ == b.lattice_ && a.support_ == b.support_ && a.masses_ == b.masses_;
  }

 private:
  std::int64_t lattice_;
  std::vector<std::int64_t> support_;
  std::vector<Rational> masses_;
  std::vector<Rational> cumulative_;     // cumulative_[k] = Pr[X <= support_[k]]
  std::vector<double> cumulative_real_;  // for sampling only
};

/// Product distribution D = D_1 x ... x D_n; all items share one lattice.
class ProductDist {
 public:
  explicit ProductDist(std::vector<DiscreteDist> items);

  std::size_t size() const { return items_.size(); }
  std::int64_t lattice() const { return lattice_; }
  const DiscreteDist& operator[](std::size_t i) const { return items_[i]; }
  std::span<const DiscreteDist> items() const { return items_; }

  ProductDist refined(std::int64_t new_lattice) const;

  friend bool operator==(const ProductDist&, const ProductDist&) = default;

 private:
  std::vector<DiscreteDist> items_;
  std::int64_t lattice_;
};

DiscreteDist make_discrete(std::int64_t lattice, std::vector<std::int64_t> support,
                           std::vector<Rational> masses);

inline const Rational& cdf(const DiscreteDist& d, std::int64_t ticks) { return d.cdf(ticks); }
Rational cdf(const DiscreteDist& d, const LatticeValue& v);
inline const Rational& cdf_left(const DiscreteDist& d, std::int64_t ticks) {
  return d.cdf_left(ticks);
}
Rational cdf_left(const DiscreteDist& d, const LatticeValue& v);

inline std::int64_t sample(const DiscreteDist& d, SeededRng& rng) { return d.sample(rng); }

/// Uniform distribution over the multiset `values` (ticks on `lattice`).
DiscreteDist empirical_from_values(std::int64_t lattice, std::span<const std::int64_t> values);

/// Empirical distribution from per-support-point counts (counts[k] draws of
/// support[k]). Equivalent to empirical_from_values on the expanded multiset.
DiscreteDist empirical_from_counts(std::int64_t lattice, std::span<const std::int64_t> support,
                                   std::span<const std::int64_t> counts);

/// Builds the distribution whose CDF at tick t is cdf_values[t], t = 0..L.
/// cdf_values must be weakly increasing with cdf_values[L] == 1.
DiscreteDist from_cdf_values(std::int64_t lattice, std::span<const Rational> cdf_values);

/// Number of grid cells per unit: ceil(eps^-2).
std::int64_t discretization_cells(const Rational& eps);

/// Rounds every value down to the grid of multiples of 1/ceil(eps^-2). The
/// output lattice is lcm(L, ceil(eps^-2)).
DiscreteDist discretize(const DiscreteDist& d, const Rational& eps);
ProductDist discretize(const ProductDist& d, const Rational& eps);

Rational kolmogorov(const DiscreteDist& d, const DiscreteDist& e);
Rational tv_distance(const DiscreteDist& d, const DiscreteDist& e);

/// Squared Hellinger distance, computed in double as 1/2 sum (sqrt p - sqrt q)^2.
/// Absolute error is below 1e-12 for all inputs.
double hellinger_sq(const DiscreteDist& d, const DiscreteDist& e);

/// 1 - prod_i (1 - H^2(P_i, Q_i)): squared Hellinger distance of the products.
double hellinger_sq_product(std::span<const std::pair<DiscreteDist, DiscreteDist>> pairs);

/// True iff F_d(v) <= F_e(v) at every lattice point (d first-order dominates e).
bool dominates(const DiscreteDist& d, const DiscreteDist& e);

/// Distribution with CDF min{1, F(v) + sqrt(F(v)(1-F(v)) 2 gamma) + gamma} at
/// every lattice point. Requires 0 < gamma < 1.
DiscreteDist breve_shift(const DiscreteDist& d, double gamma);

}  // namespace bupp
