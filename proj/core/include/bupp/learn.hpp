#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "bupp/dist.hpp"
#include "bupp/optimize.hpp"
#include "bupp/rational.hpp"
#include "bupp/revenue.hpp"
#include "bupp/rng.hpp"

namespace bupp {

/// Value histogram of one item: distinct observed values with their counts.
struct Histogram {
  std::vector<std::int64_t> values;
  std::vector<std::int64_t> counts;
};

/// Sample access to a hidden product distribution. Only the number of items
/// and the value lattice are public.
class SampleOracle {
 public:
  SampleOracle(ProductDist hidden, std::uint64_t seed);

  std::size_t items() const { return hidden_.size(); }
  std::int64_t lattice() const { return hidden_.lattice(); }

  /// One vector sample v ~ D.
  std::vector<std::int64_t> draw();
  /// Per-item histograms of N vector samples. Same law as N calls to draw().
  std::vector<Histogram> draw_histograms(std::uint64_t count);

  std::uint64_t samples_drawn() const { return drawn_; }

 private:
  ProductDist hidden_;
  SeededRng rng_;
  std::uint64_t drawn_ = 0;
};

/// Pricing-query access: each query draws a fresh v_i and reveals 1[v_i >= p].
class QueryOracle {
 public:
  QueryOracle(ProductDist hidden, std::uint64_t seed);

  std::size_t items() const { return hidden_.size(); }
  std::int64_t lattice() const { return hidden_.lattice(); }

  bool query(std::size_t item, const Rational& price);
  /// Number of positive answers among `repeats` fresh queries at one price.
  std::uint64_t query_many(std::size_t item, const Rational& price, std::uint64_t repeats);

  std::uint64_t total_queries() const { return total_; }
  std::uint64_t queries_for(std::size_t item) const { return per_item_.at(item); }

 private:
  double tail(std::size_t item, const Rational& price) const;

  ProductDist hidden_;
  SeededRng rng_;
  std::vector<std::uint64_t> per_item_;
  std::uint64_t total_ = 0;
};

struct LearnerConfig {
  Rational eps{1, 8};
  double delta = 0.1;
  double C = 1000.0;
  /// Total sample count (sample learner) or queries per threshold estimate
  /// (query learner); replaces the formula when set.
  std::optional<std::uint64_t> budget_override;

  void validate() const;
};

/// ceil(C log^4(x) log^2(log x) n / eps^2) with x = n / (eps delta).
std::uint64_t sample_budget(std::size_t n, const Rational& eps, double delta, double C);
/// ceil(C n log(n / (eps delta)) / eps^2).
std::uint64_t threshold_budget(std::size_t n, const Rational& eps, double delta, double C);

/// log(2 n N / delta) / N.
double bernstein_gamma(std::uint64_t n, std::uint64_t N, double delta);

/// |F_D(v) - F_E(v)| <= sqrt(F_D(v)(1 - F_D(v)) 2 gamma) + gamma at every lattice point.
bool check_cdf_bound(const DiscreteDist& d, const DiscreteDist& e, double gamma);

/// Empirical product distribution from sample histograms.
ProductDist empirical_product(std::int64_t lattice, const std::vector<Histogram>& hist);

/// Draws the configured number of samples, forms E and optimizes it.
PriceVector learn_from_samples(SampleOracle& oracle, const LearnerConfig& cfg,
                               const Optimizer& optimizer);

struct ThresholdProbe {
  std::int64_t threshold;  // m: estimate of F(m eps^2)
  double estimate;
};

struct QueryLearnTrace {
  std::vector<std::int64_t> k;
  std::vector<double> lambda;
  std::vector<std::uint64_t> queries_per_threshold;
  std::size_t R = 0;
  std::uint64_t per_estimate = 0;
  std::vector<ThresholdProbe> probes;
};

/// Pricing-query learner for one item. Output lives on the lattice eps^-2,
/// which must be an integer.
std::pair<DiscreteDist, QueryLearnTrace> learn_single_by_queries(QueryOracle& oracle,
                                                                 std::size_t item,
                                                                 const LearnerConfig& cfg);

struct QueryLearnResult {
  PriceVector prices;    // scaled by (1 - eps)
  PriceVector unscaled;  // optimizer output on the learned distribution
  ProductDist learned;
  std::vector<QueryLearnTrace> traces;
};

QueryLearnResult learn_product_by_queries_detailed(QueryOracle& oracle, const LearnerConfig& cfg,
                                                   const Optimizer& optimizer);
PriceVector learn_product_by_queries(QueryOracle& oracle, const LearnerConfig& cfg,
                                     const Optimizer& optimizer);

/// ((1 - eps) p_1, ..., (1 - eps) p_n) on the same lattice; throws
/// LatticeMismatch when the lattice cannot represent the result.
PriceVector scale_prices(const PriceVector& p, const Rational& eps);

/// Scales after refining the lattice just enough to represent the result.
PriceVector scale_prices_refined(const PriceVector& p, const Rational& eps);

/// |F_G(v) - F_H(v)| <= eps (1 - F_G(v)) + eps / n at every multiple of eps^2,
/// with G first discretized to the eps^2 grid.
bool query_accuracy_holds(const DiscreteDist& g, const DiscreteDist& h, const Rational& eps,
                          std::size_t n);

/// Every probe of the trace is within 0.1 (eps (1 - F_G) + eps / n) of the
/// discretized F_G.
bool concentration_event_holds(const DiscreteDist& g, const QueryLearnTrace& trace,
                               const Rational& eps, std::size_t n);

/// Step lengths lie within [0.9, 1.1] times eps (1 - F_G(k_j eps^2)) + eps / n.
bool step_lengths_sandwiched(const DiscreteDist& g, const QueryLearnTrace& trace,
                             const Rational& eps, std::size_t n);

/// log(10 n / eps) / log(1 + 0.1 eps) + 3.
double round_bound(std::size_t n, const Rational& eps);

}  // namespace bupp
