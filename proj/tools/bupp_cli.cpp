// Command-line front end: instance generation, evaluation, optimization,
// learning runs, experiments and lemma checks.

#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "bupp/error.hpp"
#include "bupp/harness.hpp"
#include "bupp/instances.hpp"
#include "bupp/io.hpp"
#include "bupp/learn.hpp"
#include "bupp/optimize.hpp"
#include "bupp/revenue.hpp"

namespace {

using nlohmann::json;
using namespace bupp;

constexpr int kVerificationFailed = 1;
constexpr int kUsageError = 2;

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  for (std::string part; std::getline(ss, part, sep);)
    if (!part.empty()) out.push_back(part);
  return out;
}

std::vector<Rational> parse_list(const std::string& s) {
  std::vector<Rational> out;
  for (const auto& part : split(s, ',')) out.push_back(parse_rational(part));
  if (out.empty()) throw InvalidInput("empty list");
  return out;
}

// "1/2,1" | "eps:1/8" (multiples of eps^2) | "lattice" (every lattice point)
PriceGrid parse_grid(const std::string& s, std::int64_t lattice) {
  if (s.empty() || s == "lattice") return PriceGrid::lattice_points(lattice);
  if (s.rfind("eps:", 0) == 0) return PriceGrid::multiples_of_eps_sq(parse_rational(s.substr(4)));
  return PriceGrid(parse_list(s));
}

json rational_json(const Rational& r) { return {{"exact", to_string(r)}, {"value", r.get_d()}}; }

json prices_json(const PriceVector& p) {
  json a = json::array();
  for (const auto& x : p.prices()) a.push_back(to_string(x));
  return a;
}

void emit(const std::string& text, const std::string& out) {
  if (out.empty() || out == "-")
    std::cout << text << (text.empty() || text.back() != '\n' ? "\n" : "");
  else
    write_file(out, text);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Item pricing for a unit-demand buyer: exact revenue, learners, experiments"};
  app.require_subcommand(1);
  app.fallthrough();
  unsigned threads = 0;
  app.add_option("--threads", threads, "Worker threads (default: $BUPP_THREADS or all cores)");

  // gen
  auto* gen = app.add_subcommand("gen", "Emit an instance as JSON");
  std::string family = "base-g", eps_text = "1/8", out;
  std::int64_t n = 4, lattice = 8;
  std::uint64_t seed = 1;
  std::size_t max_support = 3;
  gen->add_option("--family", family, "base-g|sample-hard|query-hard|equal-revenue|nonmono|random")
      ->check(CLI::IsMember({"base-g", "sample-hard", "query-hard", "equal-revenue", "nonmono",
                             "random"}));
  gen->add_option("--n", n, "Number of items");
  gen->add_option("--eps", eps_text, "Accuracy parameter (rational)");
  gen->add_option("--seed", seed, "Generator seed");
  gen->add_option("--lattice", lattice, "Value lattice (random family)");
  gen->add_option("--max-support", max_support, "Support size cap (random family)");
  gen->add_option("--out", out, "Output file (default stdout)");

  // eval
  auto* eval = app.add_subcommand("eval", "Exact revenue of a price vector");
  std::string instance_path, prices_text;
  eval->add_option("--instance", instance_path, "Instance JSON")->required();
  eval->add_option("--prices", prices_text, "Comma-separated prices, e.g. 1/2,1")->required();

  // opt
  auto* opt = app.add_subcommand("opt", "Revenue-optimal prices over a grid");
  std::string grid_text, method = "brute";
  std::size_t starts = 20;
  opt->add_option("--instance", instance_path, "Instance JSON")->required();
  opt->add_option("--grid", grid_text, "Prices list, eps:<e> or lattice (default)");
  opt->add_option("--method", method, "brute|coord")->check(CLI::IsMember({"brute", "coord"}));
  opt->add_option("--starts", starts, "Coordinate-ascent restarts");
  opt->add_option("--seed", seed, "Coordinate-ascent seed");

  // learn
  auto* learn = app.add_subcommand("learn", "Run a learner against an instance");
  std::string mode = "sample", delta_text = "0.1";
  double C = 1000.0;
  std::uint64_t budget = 0;
  learn->add_option("--instance", instance_path, "Instance JSON")->required();
  learn->add_option("--mode", mode, "sample|query")->check(CLI::IsMember({"sample", "query"}));
  learn->add_option("--budget", budget,
                    "Samples (sample mode) or queries per estimate (query mode); 0 = formula");
  learn->add_option("--eps", eps_text, "Accuracy parameter (rational)");
  learn->add_option("--delta", delta_text, "Failure probability");
  learn->add_option("--C", C, "Concentration constant");
  learn->add_option("--seed", seed, "Oracle seed");
  learn->add_option("--grid", grid_text, "Optimizer grid (default eps:<eps>)");
  bool with_trace = false;
  learn->add_flag("--trace", with_trace, "Include query-learner traces");

  // experiment
  auto* exp = app.add_subcommand("experiment", "Run a budget sweep; writes CSV");
  std::string spec_path;
  exp->add_option("--spec", spec_path, "Experiment spec JSON")->required();
  exp->add_option("--out", out, "CSV output (default stdout)");

  // verify
  auto* verify = app.add_subcommand("verify", "Numerical check of a lemma");
  std::string lemma, params_text;
  verify->add_option("--lemma", lemma, "Check name")->required()->check(CLI::IsMember(lemma_names()));
  verify->add_option("--params", params_text, "k=v,k=v,...");
  verify->add_option("--out", out, "Report JSON (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kUsageError;
  }

  try {
    if (*gen) {
      InstanceSource src;
      src.family = family;
      src.n = n;
      src.eps = parse_rational(eps_text);
      src.seed = seed;
      src.lattice = lattice;
      src.max_support = max_support;
      SeededRng rng(seed);
      std::string text;
      if (family == "sample-hard")
        text = to_json(make_sample_hard(n, src.eps, rng));
      else if (family == "query-hard")
        text = to_json(make_query_hard(n, src.eps, rng));
      else
        text = to_json(build_instance(src).dist);
      emit(text, out);
      return 0;
    }
    if (*eval) {
      ProductDist d = parse_instance(read_file(instance_path));
      auto listed = parse_list(prices_text);
      std::int64_t l = checked_lcm(d.lattice(), PriceGrid(listed).natural_lattice());
      PriceVector p = PriceVector::from_rationals(l, listed);
      auto a = align(d, p);
      auto win = win_probabilities(a.dist, a.prices);
      json w = json::array();
      for (const auto& x : win.win) w.push_back(to_string(x));
      json j = {{"revenue", rational_json(rev(a.dist, a.prices))},
                {"exante_revenue", rational_json(exante_rev(a.dist, a.prices))},
                {"win", w},
                {"no_purchase", to_string(win.no_purchase)}};
      emit(j.dump(2), "");
      return 0;
    }
    if (*opt) {
      ProductDist d = parse_instance(read_file(instance_path));
      PriceGrid grid = parse_grid(grid_text, d.lattice());
      SeededRng rng(seed);
      PricingResult r =
          method == "coord"
              ? coordinate_ascent(d, grid, starts, rng)
              : optimal_bruteforce(d, grid, SearchLimits{10'000'000, resolve_threads(threads)});
      json j = {{"prices", prices_json(r.prices)}, {"revenue", rational_json(r.revenue)}};
      emit(j.dump(2), "");
      return 0;
    }
    if (*learn) {
      ProductDist d = parse_instance(read_file(instance_path));
      LearnerConfig cfg;
      cfg.eps = parse_rational(eps_text);
      cfg.delta = parse_rational(delta_text).get_d();
      cfg.C = C;
      if (budget > 0) cfg.budget_override = budget;
      Optimizer optimizer = bruteforce_optimizer(
          grid_text.empty() ? PriceGrid::multiples_of_eps_sq(cfg.eps) : parse_grid(grid_text, d.lattice()),
          SearchLimits{10'000'000, resolve_threads(threads)});
      json j;
      PriceVector p(1, {0});
      if (mode == "sample") {
        SampleOracle oracle(d, seed);
        p = learn_from_samples(oracle, cfg, optimizer);
        j["samples_used"] = oracle.samples_drawn();
      } else {
        QueryOracle oracle(d, seed);
        auto res = learn_product_by_queries_detailed(oracle, cfg, optimizer);
        p = res.prices;
        j["queries_used"] = oracle.total_queries();
        if (with_trace) {
          json traces = json::array();
          for (const auto& t : res.traces) traces.push_back(json::parse(to_json(t)));
          j["traces"] = traces;
        }
      }
      j["prices"] = prices_json(p);
      j["revenue"] = rational_json(rev_aligned(d, p));
      emit(j.dump(2), "");
      return 0;
    }
    if (*exp) {
      ExperimentSpec spec = parse_experiment_spec(read_file(spec_path));
      if (threads > 0) spec.threads = threads;
      emit(export_csv(run_experiment(spec)), out);
      return 0;
    }
    if (*verify) {
      LemmaParams params;
      for (const auto& kv : split(params_text, ',')) {
        auto eq = kv.find('=');
        if (eq == std::string::npos || eq == 0) throw InvalidInput("bad parameter '" + kv + "'");
        params[kv.substr(0, eq)] = kv.substr(eq + 1);
      }
      if (threads > 0 && (lemma == "round_bound" || lemma == "query_accuracy") &&
          !params.count("threads"))
        params["threads"] = std::to_string(threads);
      VerificationReport rep = verify_lemma(lemma, params);
      emit(export_json(rep), out);
      std::fprintf(stderr, "%s: %s (worst margin %.6g)\n", rep.lemma.c_str(),
                   rep.passed ? "pass" : "FAIL", rep.worst_margin);
      return rep.passed ? 0 : kVerificationFailed;
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kUsageError;
  }
  return kUsageError;
}
