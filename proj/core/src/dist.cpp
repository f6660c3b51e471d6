#include "bupp/dist.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "bupp/error.hpp"

namespace bupp {

namespace {

const Rational& zero() {
  static const Rational z(0);
  return z;
}

void require_same_lattice(const DiscreteDist& d, const DiscreteDist& e) {
  if (d.lattice() != e.lattice())
    throw LatticeMismatch("distributions live on different lattices (" +
                          std::to_string(d.lattice()) + " vs " + std::to_string(e.lattice()) +
                          ")");
}

// Sorted union of both supports.
std::vector<std::int64_t> merged_support(const DiscreteDist& d, const DiscreteDist& e) {
  std::vector<std::int64_t> out;
  out.reserve(d.size() + e.size());
  std::set_union(d.support().begin(), d.support().end(), e.support().begin(), e.support().end(),
                 std::back_inserter(out));
  return out;
}

}  // namespace

DiscreteDist::DiscreteDist(std::int64_t lattice, std::vector<std::int64_t> support,
                           std::vector<Rational> masses)
    : lattice_(lattice) {
  if (lattice <= 0) throw InvalidInput("lattice must be positive");
  if (support.size() != masses.size())
    throw InvalidInput("support and masses differ in length");
  if (support.empty()) throw InvalidInput("empty support");

  std::vector<std::size_t> order(support.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return support[a] < support[b]; });

  Rational total = 0;
  for (std::size_t k = 0; k < order.size(); ++k) {
    auto v = support[order[k]];
    const Rational& m = masses[order[k]];
    if (v < 0 || v > lattice) throw InvalidInput("support value outside [0, 1]");
    if (k > 0 && support[order[k - 1]] == v) throw InvalidInput("duplicate support value");
    if (m < 0) throw InvalidInput("negative mass");
    total += m;
    if (m == 0) continue;
    support_.push_back(v);
    masses_.push_back(m);
  }
  if (total != 1) throw InvalidInput("masses sum to " + to_string(total) + ", expected 1");

  cumulative_.reserve(masses_.size());
  cumulative_real_.reserve(masses_.size());
  Rational run = 0;
  for (const auto& m : masses_) {
    run += m;
    cumulative_.push_back(run);
    cumulative_real_.push_back(run.get_d());
  }
  cumulative_real_.back() = 1.0;
}

DiscreteDist DiscreteDist::point_mass(std::int64_t lattice, std::int64_t ticks) {
  return DiscreteDist(lattice, {ticks}, {Rational(1)});
}

const Rational& DiscreteDist::cdf(std::int64_t ticks) const {
  auto it = std::upper_bound(support_.begin(), support_.end(), ticks);
  if (it == support_.begin()) return zero();
  return cumulative_[static_cast<std::size_t>(it - support_.begin()) - 1];
}

const Rational& DiscreteDist::cdf_left(std::int64_t ticks) const {
  auto it = std::lower_bound(support_.begin(), support_.end(), ticks);
  if (it == support_.begin()) return zero();
  return cumulative_[static_cast<std::size_t>(it - support_.begin()) - 1];
}

Rational DiscreteDist::mass_at(std::int64_t ticks) const {
  auto it = std::lower_bound(support_.begin(), support_.end(), ticks);
  if (it == support_.end() || *it != ticks) return 0;
  return masses_[static_cast<std::size_t>(it - support_.begin())];
}

Rational DiscreteDist::prob_at_least(const Rational& price) const {
  // smallest tick t with t / L >= price
  Rational scaled = price * static_cast<long>(lattice_);
  mpz_class t;
  mpz_cdiv_q(t.get_mpz_t(), scaled.get_num_mpz_t(), scaled.get_den_mpz_t());
  if (t <= 0) return 1;
  if (t > lattice_) return 0;
  return 1 - cdf_left(t.get_si());
}

std::int64_t DiscreteDist::sample(SeededRng& rng) const {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double x = u(rng);
  auto it = std::upper_bound(cumulative_real_.begin(), cumulative_real_.end(), x);
  auto k = static_cast<std::size_t>(it - cumulative_real_.begin());
  if (k >= support_.size()) k = support_.size() - 1;
  return support_[k];
}

DiscreteDist DiscreteDist::refined(std::int64_t new_lattice) const {
  if (new_lattice <= 0 || new_lattice % lattice_ != 0)
    throw LatticeMismatch("refined lattice must be a multiple of " + std::to_string(lattice_));
  std::int64_t f = new_lattice / lattice_;
  std::vector<std::int64_t> s(support_.begin(), support_.end());
  for (auto& v : s) v *= f;
  return DiscreteDist(new_lattice, std::move(s), masses_);
}

ProductDist::ProductDist(std::vector<DiscreteDist> items) : items_(std::move(items)) {
  if (items_.empty()) throw InvalidInput("product distribution needs at least one item");
  lattice_ = items_.front().lattice();
  for (const auto& d : items_)
    if (d.lattice() != lattice_) throw LatticeMismatch("items do not share a lattice");
}

ProductDist ProductDist::refined(std::int64_t new_lattice) const {
  if (new_lattice == lattice_) return *this;
  std::vector<DiscreteDist> out;
  out.reserve(items_.size());
  for (const auto& d : items_) out.push_back(d.refined(new_lattice));
  return ProductDist(std::move(out));
}

DiscreteDist make_discrete(std::int64_t lattice, std::vector<std::int64_t> support,
                           std::vector<Rational> masses) {
  return DiscreteDist(lattice, std::move(support), std::move(masses));
}

Rational cdf(const DiscreteDist& d, const LatticeValue& v) {
  if (v.lattice != d.lattice()) throw LatticeMismatch("value lattice differs");
  if (v.ticks < 0 || v.ticks > v.lattice) throw InvalidInput("value outside [0, 1]");
  return d.cdf(v.ticks);
}

Rational cdf_left(const DiscreteDist& d, const LatticeValue& v) {
  if (v.lattice != d.lattice()) throw LatticeMismatch("value lattice differs");
  if (v.ticks < 0 || v.ticks > v.lattice) throw InvalidInput("value outside [0, 1]");
  return d.cdf_left(v.ticks);
}

DiscreteDist empirical_from_values(std::int64_t lattice, std::span<const std::int64_t> values) {
  if (values.empty()) throw InvalidInput("empirical distribution of no values");
  std::map<std::int64_t, std::int64_t> counts;
  for (auto v : values) ++counts[v];
  std::vector<std::int64_t> support, c;
  for (auto [v, k] : counts) {
    support.push_back(v);
    c.push_back(k);
  }
  return empirical_from_counts(lattice, support, c);
}

DiscreteDist empirical_from_counts(std::int64_t lattice, std::span<const std::int64_t> support,
                                   std::span<const std::int64_t> counts) {
  if (support.size() != counts.size()) throw InvalidInput("support and counts differ in length");
  std::int64_t total = 0;
  for (auto c : counts) {
    if (c < 0) throw InvalidInput("negative count");
    total += c;
  }
  if (total == 0) throw InvalidInput("empirical distribution of no values");
  std::vector<std::int64_t> s(support.begin(), support.end());
  std::vector<Rational> m;
  m.reserve(counts.size());
  for (auto c : counts) m.push_back(ratio(c, total));
  return DiscreteDist(lattice, std::move(s), std::move(m));
}

DiscreteDist from_cdf_values(std::int64_t lattice, std::span<const Rational> cdf_values) {
  if (static_cast<std::int64_t>(cdf_values.size()) != lattice + 1)
    throw InvalidInput("need one CDF value per lattice point");
  if (cdf_values.back() != 1) throw InvalidInput("CDF must reach 1 at the top of the lattice");
  std::vector<std::int64_t> support;
  std::vector<Rational> masses;
  Rational prev = 0;
  for (std::int64_t t = 0; t <= lattice; ++t) {
    const Rational& f = cdf_values[static_cast<std::size_t>(t)];
    if (f < prev) throw InvalidInput("CDF values must be weakly increasing");
    if (f > prev) {
      support.push_back(t);
      masses.push_back(f - prev);
    }
    prev = f;
  }
  return DiscreteDist(lattice, std::move(support), std::move(masses));
}

std::int64_t discretization_cells(const Rational& eps) {
  if (eps <= 0 || eps >= 1) throw InvalidInput("eps must lie in (0, 1)");
  Rational inv = 1 / (eps * eps);
  mpz_class c;
  mpz_cdiv_q(c.get_mpz_t(), inv.get_num_mpz_t(), inv.get_den_mpz_t());
  if (!c.fits_slong_p()) throw InvalidInput("eps too small to discretize");
  return c.get_si();
}

DiscreteDist discretize(const DiscreteDist& d, const Rational& eps) {
  const std::int64_t cells = discretization_cells(eps);
  const std::int64_t out_lattice = checked_lcm(d.lattice(), cells);
  const std::int64_t in_scale = out_lattice / d.lattice();
  const std::int64_t cell_width = out_lattice / cells;
  std::map<std::int64_t, Rational> bucket;
  for (std::size_t k = 0; k < d.size(); ++k) {
    std::int64_t v = d.support()[k] * in_scale;
    bucket[(v / cell_width) * cell_width] += d.masses()[k];
  }
  std::vector<std::int64_t> support;
  std::vector<Rational> masses;
  for (auto& [v, m] : bucket) {
    support.push_back(v);
    masses.push_back(m);
  }
  return DiscreteDist(out_lattice, std::move(support), std::move(masses));
}

ProductDist discretize(const ProductDist& d, const Rational& eps) {
  std::vector<DiscreteDist> items;
  items.reserve(d.size());
  for (const auto& di : d.items()) items.push_back(discretize(di, eps));
  return ProductDist(std::move(items));
}

Rational kolmogorov(const DiscreteDist& d, const DiscreteDist& e) {
  require_same_lattice(d, e);
  Rational best = 0;
  for (auto v : merged_support(d, e)) {
    Rational gap = abs(d.cdf(v) - e.cdf(v));
    if (gap > best) best = gap;
  }
  return best;
}

Rational tv_distance(const DiscreteDist& d, const DiscreteDist& e) {
  require_same_lattice(d, e);
  Rational sum = 0;
  for (auto v : merged_support(d, e)) sum += abs(d.mass_at(v) - e.mass_at(v));
  return sum / 2;
}

double hellinger_sq(const DiscreteDist& d, const DiscreteDist& e) {
  require_same_lattice(d, e);
  double sum = 0.0;
  for (auto v : merged_support(d, e)) {
    double diff = std::sqrt(d.mass_at(v).get_d()) - std::sqrt(e.mass_at(v).get_d());
    sum += diff * diff;
  }
  return std::clamp(0.5 * sum, 0.0, 1.0);
}

double hellinger_sq_product(std::span<const std::pair<DiscreteDist, DiscreteDist>> pairs) {
  if (pairs.empty()) throw InvalidInput("no distribution pairs");
  // prod(1 - h_i) evaluated as exp(sum log1p(-h_i)) keeps tiny distances accurate
  double log_affinity = 0.0;
  for (const auto& [p, q] : pairs) {
    double h = hellinger_sq(p, q);
    if (h >= 1.0) return 1.0;
    log_affinity += std::log1p(-h);
  }
  return -std::expm1(log_affinity);
}

bool dominates(const DiscreteDist& d, const DiscreteDist& e) {
  require_same_lattice(d, e);
  for (auto v : merged_support(d, e))
    if (d.cdf(v) > e.cdf(v)) return false;
  return true;
}

DiscreteDist breve_shift(const DiscreteDist& d, double gamma) {
  if (!(gamma > 0.0 && gamma < 1.0)) throw InvalidInput("gamma must lie in (0, 1)");
  const Rational g = from_double(gamma);
  std::vector<Rational> shifted(static_cast<std::size_t>(d.lattice()) + 1);
  Rational prev = 0;
  for (std::int64_t t = 0; t <= d.lattice(); ++t) {
    const Rational& f = d.cdf(t);
    double fd = f.get_d();
    double root = std::sqrt(std::max(0.0, fd * (1.0 - fd) * 2.0 * gamma));
    Rational v = f + from_double(root) + g;
    if (v > 1) v = 1;
    // the capped formula is monotone in F; the max guards double rounding
    if (v < prev) v = prev;
    shifted[static_cast<std::size_t>(t)] = v;
    prev = v;
  }
  return from_cdf_values(d.lattice(), shifted);
}

}  // namespace bupp
