// Acceptance suite: one PASS/FAIL line per criterion.
// usage: bupp_acceptance <path-to-bupp-cli> <work-dir>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "bupp/harness.hpp"
#include "bupp/instances.hpp"
#include "bupp/io.hpp"
#include "bupp/learn.hpp"
#include "bupp/optimize.hpp"
#include "bupp/revenue.hpp"

using namespace bupp;

namespace {

struct Outcome {
  bool passed;
  std::string detail;
};

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

Rational q(long a, long b) { return ratio(a, b); }

Outcome c1() {
  SeededRng rng(20240601);
  std::uniform_int_distribution<std::size_t> npick(1, 4);
  std::uniform_int_distribution<std::int64_t> lpick(1, 8);
  int mismatches = 0;
  for (int rep = 0; rep < 500; ++rep) {
    std::int64_t l = lpick(rng);
    auto d = random_product(npick(rng), l, 4, rng);
    std::uniform_int_distribution<std::int64_t> pick(0, l);
    std::vector<std::int64_t> t(d.size());
    for (auto& x : t) x = pick(rng);
    PriceVector p(l, t);
    mismatches += rev(d, p) != rev_bruteforce(d, p);
  }
  return {mismatches == 0, std::to_string(mismatches) + " mismatches in 500 instances"};
}

Outcome c2() {
  auto ex = nonmonotonicity_example();
  PriceVector p(10, {5, 10});
  Rational a = rev(ex.original, p), b = rev(ex.dominating, p);
  bool dom = dominates(ex.dominating[0], ex.original[0]);
  return {a == q(3, 4) && b == q(29, 40) && dom,
          "rev{A,B}=" + to_string(a) + " rev{A~,B}=" + to_string(b) + " dominates=" + (dom ? "yes" : "no")};
}

Outcome c3() {
  auto opt = optimal_two_price(1000);
  double gap = std::abs(opt.q.get_d() - (std::log(4.0) - 1));
  return {gap <= 0.02, "q*=" + to_string(opt.q) + fmt(" |q* - (ln4-1)|=%.4f", gap)};
}

Outcome c4() {
  int bad = 0, checked = 0;
  for (std::int64_t n : {4, 16}) {
    for (auto eps : {q(1, 16), q(1, 32)}) {
      auto h = equal_revenue_H(n, eps);
      const PriceGrid grid = query_hard_grid(eps);
      for (const auto& p : grid.prices()) {
        ++checked;
        bad += p * h.prob_at_least(p) != q(1, 2 * n);
      }
    }
  }
  return {bad == 0, std::to_string(checked) + " grid prices, " + std::to_string(bad) + " off 1/(2n)"};
}

Outcome lemma(const std::string& name, const LemmaParams& params) {
  auto r = verify_lemma(name, params);
  std::string extra;
  for (const auto& [k, v] : r.stats) extra += " " + k + "=" + fmt("%.6g", v);
  return {r.passed, std::to_string(r.cases.size()) + " cases, worst margin " + fmt("%.6g", r.worst_margin) +
                        " vs bound " + fmt("%.6g", r.bound) + extra};
}

struct QueryRuns {
  std::map<std::string, QueryTrialStats> stats;
};

QueryRuns run_query_criteria() {
  QueryRuns out;
  for (const char* shape : {"point-mass-1", "uniform", "equal-revenue"})
    out.stats[shape] = run_query_trials(shape, 4, q(1, 8), 0.1, 1000.0, 200, 9, 0);
  return out;
}

Outcome c9(const QueryRuns& runs) {
  bool ok = true;
  std::string detail;
  for (const auto& [shape, s] : runs.stats) {
    double rate = static_cast<double>(s.accurate) / static_cast<double>(s.trials);
    ok = ok && rate >= 0.9;
    detail += shape + fmt("=%.3f ", rate);
  }
  return {ok, "accuracy rate " + detail + "(need >= 0.9)"};
}

Outcome c10(const QueryRuns& runs) {
  bool ok = true;
  std::string detail;
  for (const auto& [shape, s] : runs.stats) {
    ok = ok && s.round_bound_ok == s.event_holds;
    detail += shape + " " + std::to_string(s.round_bound_ok) + "/" + std::to_string(s.event_holds) +
              " max R " + std::to_string(s.max_rounds) + "; ";
  }
  double bound = round_bound(4, q(1, 8));
  return {ok, detail + fmt("bound %.2f", bound)};
}

Outcome c11() {
  ExperimentSpec spec;
  spec.instance.family = "sample-hard";
  spec.instance.n = 8;
  spec.instance.eps = q(1, 10);
  spec.instance.seed = 1;
  spec.eps = q(1, 10);
  spec.learner = "sample";
  spec.budgets = {100, 10'000, 1'000'000};
  spec.trials = 200;
  spec.master_seed = 7;
  auto recs = run_experiment(spec);
  std::map<std::uint64_t, double> mean;
  for (const auto& r : recs) mean[r.budget] += r.revenue_loss / static_cast<double>(spec.trials);
  bool decreasing = mean[100] > mean[10'000] && mean[10'000] > mean[1'000'000];

  const std::int64_t n = 8;
  const Rational eps = q(1, 10);
  const auto N = static_cast<std::uint64_t>(std::ceil(Rational(Rational(1, 100) * n / (eps * eps)).get_d()));
  SeededRng rng(11);
  double frac = 0;
  const int reps = 200;
  for (int r = 0; r < reps; ++r) {
    auto inst = make_sample_hard(n, eps, rng);
    frac += misidentified_pair_fraction(inst, N, rng);
  }
  frac /= reps;
  return {decreasing && frac > 0.2,
          fmt("mean loss N=1e2 %.6g", mean[100]) + fmt(", N=1e4 %.6g", mean[10'000]) +
              fmt(", N=1e6 %.6g", mean[1'000'000]) + "; misidentified at N=" + std::to_string(N) +
              fmt(": %.3f", frac)};
}

Outcome c13(const std::string& cli, const std::filesystem::path& work) {
  std::filesystem::create_directories(work);
  const auto spec = work / "spec.json";
  write_file(spec.string(), R"({
  "instance": {"family": "sample-hard", "n": 8, "seed": 3},
  "eps": "1/10", "learner": "sample", "budgets": [100, 10000],
  "trials": 64, "master_seed": 5
})");
  std::vector<std::string> outputs;
  for (int threads : {1, 1, 8, 8}) {
    auto out = work / ("out_" + std::to_string(outputs.size()) + ".csv");
    std::string cmd = "\"" + cli + "\" --threads " + std::to_string(threads) + " experiment --spec \"" +
                      spec.string() + "\" --out \"" + out.string() + "\"";
    if (std::system(cmd.c_str()) != 0) return {false, "CLI failed: " + cmd};
    outputs.push_back(read_file(out.string()));
  }
  bool same = outputs[0] == outputs[1] && outputs[1] == outputs[2] && outputs[2] == outputs[3];
  return {same && !outputs[0].empty(),
          std::to_string(outputs[0].size()) + " bytes, identical across 2 runs at 1 and 8 threads: " +
              (same ? "yes" : "no")};
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 3) {
    std::fprintf(stderr, "usage: %s <bupp-cli> <work-dir>\n", argv[0]);
    return 2;
  }
  const std::string cli = argv[1];
  const std::filesystem::path work = argv[2];

  int failures = 0;
  auto report = [&](int id, double limit_s, const std::function<Outcome()>& f) {
    auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = f();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (limit_s > 0 && secs >= limit_s) {
      o.passed = false;
      o.detail += fmt("; over time limit %.0f s", limit_s);
    }
    failures += !o.passed;
    std::printf("criterion %2d: %s  (%.2f s)  %s\n", id, o.passed ? "PASS" : "FAIL", secs, o.detail.c_str());
    std::fflush(stdout);
  };

  report(1, 10, c1);
  report(2, 1, c2);
  report(3, 60, c3);
  report(4, 0, c4);
  report(5, 0, [] { return lemma("mistake_loss", {{"n", "100"}, {"eps", "1/100"}}); });
  report(6, 0, [] { return lemma("query_low_loss", {{"n", "8"}, {"eps", "1/32"}}); });
  report(7, 0, [] {
    return lemma("nisan", {{"instances", "100"}, {"prices", "50"}, {"eps", "1/8"}, {"max_n", "3"}});
  });
  report(8, 0, [] { return lemma("approx_sm", {{"gamma", "1/64"}, {"n", "4"}, {"pairs", "200"}}); });

  QueryRuns runs;
  auto t0 = std::chrono::steady_clock::now();
  bool runs_ok = true;
  std::string runs_error;
  try {
    runs = run_query_criteria();
  } catch (const std::exception& e) {
    runs_ok = false;
    runs_error = e.what();
  }
  double run_secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  report(9, 0, [&] {
    if (!runs_ok) return Outcome{false, "exception: " + runs_error};
    auto o = c9(runs);
    if (run_secs >= 300) {
      o.passed = false;
      o.detail += "; over time limit 300 s";
    }
    o.detail += fmt("; trials took %.1f s", run_secs);
    return o;
  });
  report(10, 0, [&] { return runs_ok ? c10(runs) : Outcome{false, "exception: " + runs_error}; });
  report(11, 0, c11);
  report(12, 0, [] {
    return lemma("cdf_bound", {{"n", "4"}, {"N", "10000"}, {"delta", "0.1"}, {"trials", "200"}});
  });
  report(13, 0, [&] { return c13(cli, work); });

  std::printf("%d of 13 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
