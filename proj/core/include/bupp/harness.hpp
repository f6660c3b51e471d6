#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "bupp/dist.hpp"
#include "bupp/optimize.hpp"
#include "bupp/rational.hpp"

namespace bupp {

/// Parallelism cap: `requested` if nonzero, else $BUPP_THREADS, else the
/// hardware concurrency.
unsigned resolve_threads(unsigned requested = 0);

/// Runs body(0..count-1) on up to `threads` workers.
void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& body);

/// Named instance generator: base-g, sample-hard, query-hard, equal-revenue,
/// nonmono, random. Alternatively a JSON file path.
struct InstanceSource {
  std::string family = "base-g";
  std::int64_t n = 4;
  Rational eps{1, 8};
  std::uint64_t seed = 1;
  std::int64_t lattice = 8;     // random family
  std::size_t max_support = 3;  // random family
  std::string path;             // when set, overrides family
};

struct Instance {
  ProductDist dist;
  PriceGrid natural_grid;
};

/// Builds the instance; the grid is the family's own price set ({1/2, 1} for
/// base-g / sample-hard / nonmono, {1/2 + k eps} for query-hard /
/// equal-revenue) or the multiples of eps^2 otherwise.
Instance build_instance(const InstanceSource& src);

struct ExperimentSpec {
  InstanceSource instance;
  std::string learner = "sample";  // sample | query
  std::vector<std::uint64_t> budgets;
  std::uint64_t trials = 1;
  std::uint64_t master_seed = 0;
  std::string optimizer = "brute";  // brute | coord
  std::size_t coord_starts = 20;
  std::optional<std::vector<Rational>> grid;
  Rational eps{1, 8};
  double delta = 0.1;
  double C = 1000.0;
  unsigned threads = 0;
  bool timing = false;  // wall_time_ms stays 0 unless set, keeping output reproducible

  void validate() const;
};

ExperimentSpec parse_experiment_spec(std::string_view json);

struct ExperimentRecord {
  std::uint64_t budget = 0;
  std::uint64_t trial = 0;
  double revenue_loss = 0.0;
  std::uint64_t queries_used = 0;
  std::uint64_t samples_used = 0;
  std::uint64_t wall_time_ms = 0;
};

/// One record per (budget, trial), sorted by budget then trial. Trial seeds
/// are seed_hash({master_seed, budget, trial}); the loss baseline is the
/// optimizer's revenue on the true distribution, computed once.
std::vector<ExperimentRecord> run_experiment(const ExperimentSpec& spec);

/// budget,trial,revenue_loss,queries_used,samples_used,wall_time_ms
std::string export_csv(const std::vector<ExperimentRecord>& records);

using LemmaParams = std::map<std::string, std::string>;

struct SubCase {
  std::string name;
  bool passed = true;
  double margin = 0.0;  // slack against the bound; negative means violated
};

struct VerificationReport {
  std::string lemma;
  bool passed = true;
  double worst_margin = 0.0;
  double bound = 0.0;
  std::string bound_description;
  std::map<std::string, double> stats;
  std::vector<SubCase> cases;
  std::size_t measured = 0;  // sub-cases that carry a margin

  void add(std::string name, double margin, bool passed);
  /// Pass/fail sub-case without a numeric margin.
  void add_check(std::string name, bool passed);
};

/// approx_sm, mistake_loss, query_low_loss, sum_integral, nisan, cdf_bound,
/// round_bound, query_accuracy. Throws InvalidInput on an unknown name or
/// parameter.
VerificationReport verify_lemma(const std::string& name, const LemmaParams& params);

std::vector<std::string> lemma_names();

std::string export_json(const VerificationReport& report);

/// Hidden single-item shapes used by the query-learner checks, on lattice eps^-2
/// (equal-revenue uses its own lattice 1/eps).
DiscreteDist query_test_shape(const std::string& shape, std::size_t n, const Rational& eps);

struct QueryTrialStats {
  std::size_t trials = 0;
  std::size_t accurate = 0;          // output within eps (1 - F_G) + eps / n everywhere
  std::size_t event_holds = 0;       // every estimate within the 0.1 band
  std::size_t round_bound_ok = 0;    // among event_holds trials
  std::size_t sandwich_ok = 0;       // among event_holds trials
  std::size_t max_rounds = 0;
  double round_limit = 0.0;
  std::uint64_t max_queries = 0;
};

QueryTrialStats run_query_trials(const std::string& shape, std::size_t n, const Rational& eps,
                                 double delta, double C, std::size_t trials, std::uint64_t seed,
                                 unsigned threads);

}  // namespace bupp
