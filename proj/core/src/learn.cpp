#include "bupp/learn.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "bupp/error.hpp"

namespace bupp {

namespace {

// Counts of `total` draws from d over its support, by sequential binomials.
std::vector<std::int64_t> multinomial_counts(const DiscreteDist& d, std::uint64_t total,
                                             SeededRng& rng) {
  std::vector<std::int64_t> counts(d.size(), 0);
  auto remaining = static_cast<std::int64_t>(total);
  Rational left = 1;
  for (std::size_t k = 0; k < d.size() && remaining > 0; ++k) {
    const Rational& m = d.masses()[k];
    if (k + 1 == d.size() || m >= left) {
      counts[k] = remaining;
      break;
    }
    double p = Rational(m / left).get_d();
    std::binomial_distribution<std::int64_t> bin(remaining, std::clamp(p, 0.0, 1.0));
    counts[k] = bin(rng);
    remaining -= counts[k];
    left -= m;
  }
  return counts;
}

std::uint64_t checked_ceil(double x, const char* what) {
  if (!std::isfinite(x) || x < 0 || x >= 9.2e18)
    throw InvalidInput(std::string(what) + " is not representable");
  return static_cast<std::uint64_t>(std::ceil(x));
}

std::int64_t grid_cells(const Rational& eps) {
  if (eps <= 0 || eps >= 1) throw InvalidInput("eps must lie in (0, 1)");
  if (eps.get_num() != 1 || !eps.get_den().fits_slong_p())
    throw InvalidInput("query learner needs eps = 1/m for an integer m");
  std::int64_t m = eps.get_den().get_si();
  if (m > 3'000'000'000LL) throw InvalidInput("eps too small");
  return m * m;
}

// F_G at every multiple of eps^2 (index m = 0..K), after discretization.
std::vector<Rational> grid_cdf(const DiscreteDist& g, const Rational& eps) {
  const std::int64_t k = discretization_cells(eps);
  DiscreteDist gd = discretize(g, eps);
  const std::int64_t step = gd.lattice() / k;
  std::vector<Rational> out(static_cast<std::size_t>(k) + 1);
  for (std::int64_t m = 0; m <= k; ++m) out[static_cast<std::size_t>(m)] = gd.cdf(m * step);
  return out;
}

}  // namespace

SampleOracle::SampleOracle(ProductDist hidden, std::uint64_t seed)
    : hidden_(std::move(hidden)), rng_(seed) {}

std::vector<std::int64_t> SampleOracle::draw() {
  std::vector<std::int64_t> v(hidden_.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = hidden_[i].sample(rng_);
  ++drawn_;
  return v;
}

std::vector<Histogram> SampleOracle::draw_histograms(std::uint64_t count) {
  if (count == 0) throw InvalidInput("need at least one sample");
  std::vector<Histogram> out(hidden_.size());
  for (std::size_t i = 0; i < hidden_.size(); ++i) {
    auto counts = multinomial_counts(hidden_[i], count, rng_);
    for (std::size_t k = 0; k < counts.size(); ++k) {
      if (counts[k] == 0) continue;
      out[i].values.push_back(hidden_[i].support()[k]);
      out[i].counts.push_back(counts[k]);
    }
  }
  drawn_ += count;
  return out;
}

QueryOracle::QueryOracle(ProductDist hidden, std::uint64_t seed)
    : hidden_(std::move(hidden)), rng_(seed), per_item_(hidden_.size(), 0) {}

double QueryOracle::tail(std::size_t item, const Rational& price) const {
  if (item >= hidden_.size()) throw InvalidInput("item index out of range");
  if (price < 0 || price > 1) throw InvalidInput("price outside [0, 1]");
  return hidden_[item].prob_at_least(price).get_d();
}

bool QueryOracle::query(std::size_t item, const Rational& price) {
  return query_many(item, price, 1) == 1;
}

std::uint64_t QueryOracle::query_many(std::size_t item, const Rational& price,
                                      std::uint64_t repeats) {
  double p = tail(item, price);
  per_item_[item] += repeats;
  total_ += repeats;
  if (p <= 0.0) return 0;
  if (p >= 1.0) return repeats;
  std::binomial_distribution<std::int64_t> bin(static_cast<std::int64_t>(repeats), p);
  return static_cast<std::uint64_t>(bin(rng_));
}

void LearnerConfig::validate() const {
  if (eps <= 0 || eps >= 1) throw InvalidInput("eps must lie in (0, 1)");
  if (!(delta > 0 && delta < 1)) throw InvalidInput("delta must lie in (0, 1)");
  if (!(C > 0)) throw InvalidInput("C must be positive");
  if (budget_override && *budget_override == 0) throw InvalidInput("budget must be positive");
}

std::uint64_t sample_budget(std::size_t n, const Rational& eps, double delta, double C) {
  double e = eps.get_d();
  double lx = std::log(static_cast<double>(n) / (e * delta));
  double llx = std::log(lx);
  return checked_ceil(C * std::pow(lx, 4) * llx * llx * static_cast<double>(n) / (e * e),
                      "sample budget");
}

std::uint64_t threshold_budget(std::size_t n, const Rational& eps, double delta, double C) {
  double e = eps.get_d();
  double nd = static_cast<double>(n);
  return checked_ceil(C * nd * std::log(nd / (e * delta)) / (e * e), "threshold budget");
}

double bernstein_gamma(std::uint64_t n, std::uint64_t N, double delta) {
  if (N == 0) throw InvalidInput("N must be positive");
  double nn = static_cast<double>(N);
  return std::log(2.0 * static_cast<double>(n) * nn / delta) / nn;
}

bool check_cdf_bound(const DiscreteDist& d, const DiscreteDist& e, double gamma) {
  if (d.lattice() != e.lattice()) throw LatticeMismatch("distributions on different lattices");
  for (std::int64_t t = 0; t <= d.lattice(); ++t) {
    double f = d.cdf(t).get_d();
    double gap = std::abs(Rational(d.cdf(t) - e.cdf(t)).get_d());
    if (gap > std::sqrt(std::max(0.0, f * (1 - f) * 2 * gamma)) + gamma) return false;
  }
  return true;
}

ProductDist empirical_product(std::int64_t lattice, const std::vector<Histogram>& hist) {
  std::vector<DiscreteDist> items;
  items.reserve(hist.size());
  for (const auto& h : hist) items.push_back(empirical_from_counts(lattice, h.values, h.counts));
  return ProductDist(std::move(items));
}

PriceVector learn_from_samples(SampleOracle& oracle, const LearnerConfig& cfg,
                               const Optimizer& optimizer) {
  cfg.validate();
  std::uint64_t n = cfg.budget_override
                        ? *cfg.budget_override
                        : sample_budget(oracle.items(), cfg.eps, cfg.delta, cfg.C);
  auto e = empirical_product(oracle.lattice(), oracle.draw_histograms(n));
  return optimizer(e).prices;
}

std::pair<DiscreteDist, QueryLearnTrace> learn_single_by_queries(QueryOracle& oracle,
                                                                 std::size_t item,
                                                                 const LearnerConfig& cfg) {
  cfg.validate();
  const std::int64_t K = grid_cells(cfg.eps);
  const std::size_t n = oracle.items();
  const double eps = cfg.eps.get_d();
  const double slack = eps / static_cast<double>(n);

  QueryLearnTrace trace;
  trace.per_estimate =
      cfg.budget_override ? *cfg.budget_override : threshold_budget(n, cfg.eps, cfg.delta, cfg.C);
  const std::uint64_t N = trace.per_estimate;

  std::uint64_t round_queries = 0;
  auto estimate = [&](std::int64_t m) {
    std::uint64_t above = oracle.query_many(item, ratio(m + 1, K), N);
    round_queries += N;
    Rational f = ratio(static_cast<std::int64_t>(N - above), static_cast<std::int64_t>(N));
    trace.probes.push_back({m, f.get_d()});
    return f;
  };

  std::vector<Rational> fh(static_cast<std::size_t>(K) + 1);
  fh[static_cast<std::size_t>(K)] = 1;
  std::int64_t k = K;
  double lambda = slack;
  trace.k.push_back(k);
  trace.lambda.push_back(lambda);

  while (k > 0) {
    round_queries = 0;
    const double target = fh[static_cast<std::size_t>(k)].get_d() - 0.5 * lambda;
    std::int64_t l = 0, r = k - 1;
    while (l < r) {
      std::int64_t m = (l + r + 1) / 2;
      if (estimate(m).get_d() <= target)
        l = m;
      else
        r = m - 1;
    }
    const std::int64_t next = l;
    Rational f = estimate(next);
    if (f > fh[static_cast<std::size_t>(k)]) f = fh[static_cast<std::size_t>(k)];
    fh[static_cast<std::size_t>(next)] = f;
    for (std::int64_t i = next + 1; i < k; ++i)
      fh[static_cast<std::size_t>(i)] = fh[static_cast<std::size_t>(k)];
    trace.queries_per_threshold.push_back(round_queries);

    k = next;
    lambda = eps * (1.0 - f.get_d()) + slack;
    trace.k.push_back(k);
    trace.lambda.push_back(lambda);
  }
  trace.R = trace.k.size();
  return {from_cdf_values(K, fh), std::move(trace)};
}

PriceVector scale_prices(const PriceVector& p, const Rational& eps) {
  if (eps < 0 || eps >= 1) throw InvalidInput("eps must lie in [0, 1)");
  std::vector<Rational> out;
  out.reserve(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) out.push_back((1 - eps) * p.price(i));
  try {
    return PriceVector::from_rationals(p.lattice(), out);
  } catch (const InvalidInput&) {
    throw LatticeMismatch("lattice 1/" + std::to_string(p.lattice()) +
                          " cannot represent the scaled prices; refine first");
  }
}

PriceVector scale_prices_refined(const PriceVector& p, const Rational& eps) {
  Rational keep = 1 - eps;
  if (!keep.get_den().fits_slong_p()) throw InvalidInput("eps denominator too large");
  return scale_prices(p.refined(checked_lcm(p.lattice(), p.lattice() * keep.get_den().get_si())),
                      eps);
}

QueryLearnResult learn_product_by_queries_detailed(QueryOracle& oracle, const LearnerConfig& cfg,
                                                   const Optimizer& optimizer) {
  std::vector<DiscreteDist> items;
  std::vector<QueryLearnTrace> traces;
  for (std::size_t i = 0; i < oracle.items(); ++i) {
    auto [h, t] = learn_single_by_queries(oracle, i, cfg);
    items.push_back(std::move(h));
    traces.push_back(std::move(t));
  }
  ProductDist learned(std::move(items));
  PriceVector p1 = optimizer(learned).prices;
  PriceVector p2 = scale_prices_refined(p1, cfg.eps);
  return QueryLearnResult{std::move(p2), std::move(p1), std::move(learned), std::move(traces)};
}

PriceVector learn_product_by_queries(QueryOracle& oracle, const LearnerConfig& cfg,
                                     const Optimizer& optimizer) {
  return learn_product_by_queries_detailed(oracle, cfg, optimizer).prices;
}

bool query_accuracy_holds(const DiscreteDist& g, const DiscreteDist& h, const Rational& eps,
                          std::size_t n) {
  const auto fg = grid_cdf(g, eps);
  const auto fh = grid_cdf(h, eps);
  const Rational slack = eps / static_cast<long>(n);
  for (std::size_t m = 0; m < fg.size(); ++m) {
    Rational gap = fg[m] - fh[m];
    if (abs(gap) > eps * (1 - fg[m]) + slack) return false;
  }
  return true;
}

bool concentration_event_holds(const DiscreteDist& g, const QueryLearnTrace& trace,
                               const Rational& eps, std::size_t n) {
  const auto fg = grid_cdf(g, eps);
  const double e = eps.get_d(), slack = e / static_cast<double>(n);
  for (const auto& probe : trace.probes) {
    double f = fg.at(static_cast<std::size_t>(probe.threshold)).get_d();
    if (std::abs(probe.estimate - f) > 0.1 * (e * (1 - f) + slack)) return false;
  }
  return true;
}

bool step_lengths_sandwiched(const DiscreteDist& g, const QueryLearnTrace& trace,
                             const Rational& eps, std::size_t n) {
  const auto fg = grid_cdf(g, eps);
  const double e = eps.get_d(), slack = e / static_cast<double>(n);
  for (std::size_t j = 0; j < trace.k.size(); ++j) {
    double target = e * (1 - fg.at(static_cast<std::size_t>(trace.k[j])).get_d()) + slack;
    if (trace.lambda[j] < 0.9 * target || trace.lambda[j] > 1.1 * target) return false;
  }
  return true;
}

double round_bound(std::size_t n, const Rational& eps) {
  double e = eps.get_d();
  return std::log(10.0 * static_cast<double>(n) / e) / std::log(1.0 + 0.1 * e) + 3.0;
}

}  // namespace bupp
