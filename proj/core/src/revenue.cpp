#include "bupp/revenue.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "bupp/error.hpp"

namespace bupp {

PriceVector::PriceVector(std::int64_t lattice, std::vector<std::int64_t> ticks)
    : lattice_(lattice), ticks_(std::move(ticks)) {
  if (lattice_ <= 0) throw InvalidInput("lattice must be positive");
  if (ticks_.empty()) throw InvalidInput("empty price vector");
  for (auto t : ticks_)
    if (t < 0 || t > lattice_) throw InvalidInput("price outside [0, 1]");
}

PriceVector PriceVector::from_rationals(std::int64_t lattice, const std::vector<Rational>& prices) {
  std::vector<std::int64_t> ticks;
  ticks.reserve(prices.size());
  for (const auto& p : prices) {
    std::int64_t t = 0;
    if (!to_ticks(p, lattice, t))
      throw InvalidInput("price " + to_string(p) + " is not on lattice 1/" +
                         std::to_string(lattice));
    ticks.push_back(t);
  }
  return PriceVector(lattice, std::move(ticks));
}

std::vector<Rational> PriceVector::prices() const {
  std::vector<Rational> out;
  out.reserve(ticks_.size());
  for (std::size_t i = 0; i < ticks_.size(); ++i) out.push_back(price(i));
  return out;
}

PriceVector PriceVector::refined(std::int64_t new_lattice) const {
  if (new_lattice <= 0 || new_lattice % lattice_ != 0)
    throw LatticeMismatch("refined lattice must be a multiple of " + std::to_string(lattice_));
  auto t = ticks_;
  for (auto& x : t) x *= new_lattice / lattice_;
  return PriceVector(new_lattice, std::move(t));
}

namespace {

void require_compatible(const ProductDist& d, const PriceVector& p) {
  if (d.size() != p.size())
    throw InvalidInput("price vector has " + std::to_string(p.size()) + " entries for " +
                       std::to_string(d.size()) + " items");
  if (d.lattice() != p.lattice())
    throw LatticeMismatch("price lattice " + std::to_string(p.lattice()) +
                          " differs from distribution lattice " + std::to_string(d.lattice()));
}

// Items sorted by price ascending, then index ascending.
std::vector<std::size_t> price_rank_order(const PriceVector& p) {
  std::vector<std::size_t> order(p.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return p[a] < p[b]; });
  return order;
}

// Every utility level theta (in ticks) at which some item has a point mass.
std::set<std::int64_t> utility_levels(const ProductDist& d, const PriceVector& p) {
  std::set<std::int64_t> thetas;
  for (std::size_t i = 0; i < d.size(); ++i)
    for (auto v : d[i].support())
      if (v >= p[i]) thetas.insert(v - p[i]);
  return thetas;
}

}  // namespace

int buyer_choice(const std::vector<std::int64_t>& values, const PriceVector& p) {
  int best = -1;
  std::int64_t best_u = 0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    std::int64_t u = values[i] - p[i];
    if (u < 0) continue;
    if (best < 0 || u > best_u || (u == best_u && p[i] >= p[static_cast<std::size_t>(best)])) {
      best = static_cast<int>(i);
      best_u = u;
    }
  }
  return best;
}

WinProfile win_probabilities(const ProductDist& d, const PriceVector& p) {
  require_compatible(d, p);
  const std::size_t n = d.size();
  const auto order = price_rank_order(p);

  WinProfile out;
  out.win.assign(n, Rational(0));
  std::vector<Rational> prefix(n + 1), suffix(n + 1);
  for (auto theta : utility_levels(d, p)) {
    prefix[0] = 1;
    for (std::size_t r = 0; r < n; ++r) {
      std::size_t j = order[r];
      prefix[r + 1] = prefix[r] * d[j].cdf(p[j] + theta);
    }
    suffix[n] = 1;
    for (std::size_t r = n; r-- > 0;) {
      std::size_t j = order[r];
      suffix[r] = suffix[r + 1] * d[j].cdf_left(p[j] + theta);
    }
    for (std::size_t r = 0; r < n; ++r) {
      std::size_t i = order[r];
      Rational m = d[i].mass_at(p[i] + theta);
      if (m == 0) continue;
      out.win[i] += m * prefix[r] * suffix[r + 1];
    }
  }

  out.no_purchase = 1;
  for (std::size_t j = 0; j < n; ++j) out.no_purchase *= d[j].cdf_left(p[j]);
  return out;
}

Rational rev(const ProductDist& d, const PriceVector& p) {
  auto profile = win_probabilities(d, p);
  Rational total = 0;
  for (std::size_t i = 0; i < d.size(); ++i) total += profile.win[i] * p.price(i);
  return total;
}

Rational rev_bruteforce(const ProductDist& d, const PriceVector& p, std::uint64_t max_outcomes) {
  require_compatible(d, p);
  const std::size_t n = d.size();
  std::uint64_t outcomes = 1;
  for (const auto& di : d.items()) {
    outcomes *= di.size();
    if (outcomes > max_outcomes)
      throw SearchSpaceTooLarge("joint support exceeds " + std::to_string(max_outcomes));
  }

  std::vector<std::size_t> idx(n, 0);
  std::vector<std::int64_t> values(n);
  Rational total = 0;
  for (std::uint64_t o = 0; o < outcomes; ++o) {
    Rational prob = 1;
    for (std::size_t i = 0; i < n; ++i) {
      values[i] = d[i].support()[idx[i]];
      prob *= d[i].masses()[idx[i]];
    }
    int winner = buyer_choice(values, p);
    if (winner >= 0) total += prob * p.price(static_cast<std::size_t>(winner));
    for (std::size_t i = 0; i < n; ++i) {
      if (++idx[i] < d[i].size()) break;
      idx[i] = 0;
    }
  }
  return total;
}

MonteCarloEstimate rev_monte_carlo(const ProductDist& d, const PriceVector& p,
                                   std::uint64_t trials, SeededRng& rng) {
  require_compatible(d, p);
  if (trials == 0) throw InvalidInput("need at least one trial");
  std::vector<std::int64_t> values(d.size());
  std::vector<double> price(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) price[i] = p.price(i).get_d();

  double mean = 0.0, m2 = 0.0;
  for (std::uint64_t t = 0; t < trials; ++t) {
    for (std::size_t i = 0; i < d.size(); ++i) values[i] = d[i].sample(rng);
    int w = buyer_choice(values, p);
    double x = w >= 0 ? price[static_cast<std::size_t>(w)] : 0.0;
    double delta = x - mean;
    mean += delta / static_cast<double>(t + 1);
    m2 += delta * (x - mean);
  }
  MonteCarloEstimate est;
  est.mean = mean;
  if (trials > 1) {
    double var = m2 / static_cast<double>(trials - 1);
    est.std_error = std::sqrt(var / static_cast<double>(trials));
  }
  return est;
}

Rational exante_rev(const ProductDist& d, const PriceVector& p) {
  require_compatible(d, p);
  std::vector<std::size_t> order(d.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return p[a] > p[b]; });
  Rational budget = 1, total = 0;
  for (auto i : order) {
    if (budget == 0) break;
    Rational q = 1 - d[i].cdf_left(p[i]);
    if (q > budget) q = budget;
    total += q * p.price(i);
    budget -= q;
  }
  return total;
}

Aligned align(const ProductDist& d, const PriceVector& p) {
  std::int64_t l = checked_lcm(d.lattice(), p.lattice());
  return Aligned{d.refined(l), p.lattice() == l ? p : p.refined(l)};
}

Rational rev_aligned(const ProductDist& d, const PriceVector& p) {
  if (d.lattice() == p.lattice()) return rev(d, p);
  auto a = align(d, p);
  return rev(a.dist, a.prices);
}

Rational sum_integral_lhs(const ProductDist& d, const PriceVector& p, const Rational& beta) {
  require_compatible(d, p);
  const std::size_t n = d.size();
  const auto order = price_rank_order(p);
  Rational total = 0;
  // prefix of (1 - F) over ranks <= r and suffix of (1 - F^-) over ranks > r
  std::vector<Rational> lower(n + 1), upper(n + 1);
  for (auto theta : utility_levels(d, p)) {
    lower[0] = 0;
    for (std::size_t r = 0; r < n; ++r) {
      std::size_t j = order[r];
      lower[r + 1] = lower[r] + (1 - d[j].cdf(p[j] + theta));
    }
    upper[n] = 0;
    for (std::size_t r = n; r-- > 0;) {
      std::size_t j = order[r];
      upper[r] = upper[r + 1] + (1 - d[j].cdf_left(p[j] + theta));
    }
    for (std::size_t r = 0; r < n; ++r) {
      std::size_t i = order[r];
      if (lower[r + 1] + upper[r + 1] < beta) total += d[i].mass_at(p[i] + theta);
    }
  }
  return total;
}

}  // namespace bupp
