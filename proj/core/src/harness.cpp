#include "bupp/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <limits>
#include <mutex>
#include <set>
#include <thread>

#include <json.hpp>

#include "bupp/error.hpp"
#include "bupp/instances.hpp"
#include "bupp/io.hpp"
#include "bupp/learn.hpp"
#include "bupp/revenue.hpp"
#include "bupp/rng.hpp"

namespace bupp {

using nlohmann::json;

unsigned resolve_threads(unsigned requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("BUPP_THREADS")) {
    char* end = nullptr;
    unsigned long v = std::strtoul(env, &end, 10);
    if (end != env && *end == '\0' && v > 0 && v <= 1024) return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_for(std::size_t count, unsigned threads,
                  const std::function<void(std::size_t)>& body) {
  threads = static_cast<unsigned>(std::min<std::size_t>(std::max(1u, threads), count));
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_lock;
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (std::size_t i; (i = next.fetch_add(1)) < count;) {
        try {
          body(i);
        } catch (...) {
          std::lock_guard lock(failure_lock);
          if (!failure) failure = std::current_exception();
          next = count;
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

Instance build_instance(const InstanceSource& src) {
  if (!src.path.empty())
    return Instance{parse_instance(read_file(src.path)), PriceGrid::multiples_of_eps_sq(src.eps)};
  SeededRng rng(src.seed);
  const auto& f = src.family;
  if (f == "base-g") {
    std::vector<DiscreteDist> items(static_cast<std::size_t>(src.n), base_G(src.n));
    return Instance{ProductDist(std::move(items)), sample_hard_grid()};
  }
  if (f == "sample-hard") return Instance{make_sample_hard(src.n, src.eps, rng).dist, sample_hard_grid()};
  if (f == "query-hard")
    return Instance{make_query_hard(src.n, src.eps, rng).dist, query_hard_grid(src.eps)};
  if (f == "equal-revenue") {
    std::vector<DiscreteDist> items(static_cast<std::size_t>(src.n), equal_revenue_H(src.n, src.eps));
    return Instance{ProductDist(std::move(items)), query_hard_grid(src.eps)};
  }
  if (f == "nonmono") return Instance{nonmonotonicity_example().original, sample_hard_grid()};
  if (f == "random") {
    if (src.n < 1) throw InvalidInput("n must be positive");
    return Instance{random_product(static_cast<std::size_t>(src.n), src.lattice, src.max_support, rng),
                    PriceGrid::multiples_of_eps_sq(src.eps)};
  }
  throw InvalidInput("unknown instance family '" + f + "'");
}

// ---------------------------------------------------------------------------
// experiment spec

namespace {

Rational json_rational(const json& j, const std::string& key) {
  if (j.is_string()) return parse_rational(j.get<std::string>());
  if (j.is_number()) return parse_rational(j.dump());
  throw InvalidInput("field '" + key + "' must be a number or a rational string");
}

template <class T>
T json_get(const json& j, const std::string& key) {
  try {
    return j.get<T>();
  } catch (const json::exception&) {
    throw InvalidInput("field '" + key + "' has the wrong type");
  }
}

void reject_unknown(const json& j, std::initializer_list<const char*> known, const char* where) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool ok = false;
    for (auto k : known) ok = ok || it.key() == k;
    if (!ok) throw InvalidInput(std::string("unknown field '") + it.key() + "' in " + where);
  }
}

}  // namespace

void ExperimentSpec::validate() const {
  if (learner != "sample" && learner != "query")
    throw InvalidInput("learner must be 'sample' or 'query'");
  if (optimizer != "brute" && optimizer != "coord")
    throw InvalidInput("optimizer must be 'brute' or 'coord'");
  if (budgets.empty()) throw InvalidInput("budgets must be nonempty");
  for (std::size_t i = 0; i < budgets.size(); ++i) {
    if (budgets[i] == 0) throw InvalidInput("budgets must be positive");
    if (i > 0 && budgets[i] <= budgets[i - 1]) throw InvalidInput("budgets must be increasing");
  }
  if (trials == 0) throw InvalidInput("trials must be at least 1");
  if (coord_starts == 0) throw InvalidInput("coord_starts must be at least 1");
  LearnerConfig{eps, delta, C, std::nullopt}.validate();
}

ExperimentSpec parse_experiment_spec(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InvalidInput(std::string("malformed spec: ") + e.what());
  }
  if (!j.is_object()) throw InvalidInput("spec must be a JSON object");
  reject_unknown(j,
                 {"instance", "learner", "budgets", "trials", "master_seed", "optimizer",
                  "coord_starts", "grid", "eps", "delta", "C", "threads", "timing"},
                 "spec");
  ExperimentSpec s;
  if (!j.contains("instance")) throw InvalidInput("spec needs an instance");
  const json& inst = j["instance"];
  if (!inst.is_object()) throw InvalidInput("instance must be an object");
  reject_unknown(inst, {"family", "n", "eps", "seed", "lattice", "max_support", "path"},
                 "instance");
  if (inst.contains("family")) s.instance.family = json_get<std::string>(inst["family"], "family");
  if (inst.contains("n")) s.instance.n = json_get<std::int64_t>(inst["n"], "n");
  if (inst.contains("seed")) s.instance.seed = json_get<std::uint64_t>(inst["seed"], "seed");
  if (inst.contains("lattice")) s.instance.lattice = json_get<std::int64_t>(inst["lattice"], "lattice");
  if (inst.contains("max_support"))
    s.instance.max_support = json_get<std::size_t>(inst["max_support"], "max_support");
  if (inst.contains("path")) s.instance.path = json_get<std::string>(inst["path"], "path");

  if (j.contains("eps")) s.eps = json_rational(j["eps"], "eps");
  s.instance.eps = inst.contains("eps") ? json_rational(inst["eps"], "eps") : s.eps;
  if (j.contains("learner")) s.learner = json_get<std::string>(j["learner"], "learner");
  if (!j.contains("budgets")) throw InvalidInput("spec needs budgets");
  s.budgets = json_get<std::vector<std::uint64_t>>(j["budgets"], "budgets");
  if (j.contains("trials")) s.trials = json_get<std::uint64_t>(j["trials"], "trials");
  if (j.contains("master_seed")) s.master_seed = json_get<std::uint64_t>(j["master_seed"], "master_seed");
  if (j.contains("optimizer")) s.optimizer = json_get<std::string>(j["optimizer"], "optimizer");
  if (j.contains("coord_starts"))
    s.coord_starts = json_get<std::size_t>(j["coord_starts"], "coord_starts");
  if (j.contains("grid")) {
    if (!j["grid"].is_array()) throw InvalidInput("grid must be an array");
    std::vector<Rational> g;
    for (const auto& x : j["grid"]) g.push_back(json_rational(x, "grid"));
    s.grid = std::move(g);
  }
  if (j.contains("delta")) s.delta = json_rational(j["delta"], "delta").get_d();
  if (j.contains("C")) s.C = json_rational(j["C"], "C").get_d();
  if (j.contains("threads")) s.threads = json_get<unsigned>(j["threads"], "threads");
  if (j.contains("timing")) s.timing = json_get<bool>(j["timing"], "timing");
  s.validate();
  return s;
}

std::vector<ExperimentRecord> run_experiment(const ExperimentSpec& spec) {
  spec.validate();
  const Instance inst = build_instance(spec.instance);
  const PriceGrid grid = spec.grid ? PriceGrid(*spec.grid) : inst.natural_grid;
  const unsigned threads = resolve_threads(spec.threads);

  auto make_optimizer = [&](std::uint64_t seed) -> Optimizer {
    if (spec.optimizer == "coord") return coordinate_optimizer(grid, spec.coord_starts, seed);
    return bruteforce_optimizer(grid);
  };
  const Rational best = make_optimizer(seed_hash({spec.master_seed})).operator()(inst.dist).revenue;

  const std::size_t per_budget = spec.trials;
  const std::size_t total = spec.budgets.size() * per_budget;
  std::vector<ExperimentRecord> records(total);

  parallel_for(total, threads, [&](std::size_t idx) {
    const std::uint64_t budget = spec.budgets[idx / per_budget];
    const std::uint64_t trial = idx % per_budget;
    const std::uint64_t seed = seed_hash({spec.master_seed, budget, trial});
    const auto start = std::chrono::steady_clock::now();

    LearnerConfig cfg{spec.eps, spec.delta, spec.C, budget};
    Optimizer opt = make_optimizer(mix64(seed));
    ExperimentRecord rec;
    rec.budget = budget;
    rec.trial = trial;
    PriceVector learned = [&] {
      if (spec.learner == "sample") {
        SampleOracle oracle(inst.dist, seed);
        auto p = learn_from_samples(oracle, cfg, opt);
        rec.samples_used = oracle.samples_drawn();
        return p;
      }
      QueryOracle oracle(inst.dist, seed);
      auto p = learn_product_by_queries(oracle, cfg, opt);
      rec.queries_used = oracle.total_queries();
      return p;
    }();
    rec.revenue_loss = Rational(best - rev_aligned(inst.dist, learned)).get_d();
    if (spec.timing)
      rec.wall_time_ms = static_cast<std::uint64_t>(
          std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() -
                                                                start)
              .count());
    records[idx] = rec;
  });
  return records;
}

std::string export_csv(const std::vector<ExperimentRecord>& records) {
  std::string out = "budget,trial,revenue_loss,queries_used,samples_used,wall_time_ms\n";
  char buf[64];
  for (const auto& r : records) {
    std::snprintf(buf, sizeof buf, "%.12g", r.revenue_loss);
    out += std::to_string(r.budget) + ',' + std::to_string(r.trial) + ',' + buf + ',' +
           std::to_string(r.queries_used) + ',' + std::to_string(r.samples_used) + ',' +
           std::to_string(r.wall_time_ms) + '\n';
  }
  return out;
}

// ---------------------------------------------------------------------------
// lemma checks

void VerificationReport::add(std::string name, double margin, bool ok) {
  if (measured++ == 0 || margin < worst_margin) worst_margin = margin;
  passed = passed && ok;
  cases.push_back({std::move(name), ok, margin});
}

void VerificationReport::add_check(std::string name, bool ok) {
  passed = passed && ok;
  cases.push_back({std::move(name), ok, 0.0});
}

namespace {

class Params {
 public:
  explicit Params(const LemmaParams& p) : p_(p) {}

  std::int64_t integer(const std::string& key, std::int64_t def) {
    auto v = find(key);
    if (!v) return def;
    Rational r = parse(key, *v);
    if (r.get_den() != 1 || !r.get_num().fits_slong_p())
      throw InvalidInput("parameter '" + key + "' must be an integer");
    return r.get_num().get_si();
  }
  Rational rational(const std::string& key, const Rational& def) {
    auto v = find(key);
    return v ? parse(key, *v) : def;
  }
  double real(const std::string& key, double def) {
    auto v = find(key);
    return v ? parse(key, *v).get_d() : def;
  }
  std::string text(const std::string& key, const std::string& def) {
    auto v = find(key);
    return v ? *v : def;
  }
  void finish() const {
    for (const auto& [k, v] : p_)
      if (!used_.count(k)) throw InvalidInput("unknown parameter '" + k + "'");
  }

 private:
  std::optional<std::string> find(const std::string& key) {
    used_.insert(key);
    auto it = p_.find(key);
    if (it == p_.end()) return std::nullopt;
    return it->second;
  }
  static Rational parse(const std::string& key, const std::string& v) {
    try {
      return parse_rational(v);
    } catch (const InvalidInput&) {
      throw InvalidInput("parameter '" + key + "' is not a number: " + v);
    }
  }

  const LemmaParams& p_;
  std::set<std::string> used_;
};

std::size_t positive(std::int64_t v, const char* what) {
  if (v <= 0) throw InvalidInput(std::string(what) + " must be positive");
  return static_cast<std::size_t>(v);
}

PriceVector random_prices(std::size_t n, std::int64_t lattice, SeededRng& rng) {
  std::uniform_int_distribution<std::int64_t> pick(0, lattice);
  std::vector<std::int64_t> t(n);
  for (auto& x : t) x = pick(rng);
  return PriceVector(lattice, std::move(t));
}

// H with F_H(v) = max(0, max_{w <= v} (F_G(w) - d(w))), where
// 0 <= d(w) <= sqrt((1 - F_G(w)) gamma) + gamma and d(1) = 0.
DiscreteDist dominating_neighbour(const DiscreteDist& g, double gamma, SeededRng& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const std::int64_t l = g.lattice();
  std::vector<Rational> f(static_cast<std::size_t>(l) + 1);
  Rational run = 0;
  for (std::int64_t t = 0; t < l; ++t) {
    const Rational& fg = g.cdf(t);
    double bound = std::sqrt((1.0 - fg.get_d()) * gamma) + gamma;
    Rational d(static_cast<long>(std::floor(u(rng) * bound * 1e6)), 1000000L);
    d.canonicalize();
    Rational cand = fg - d;
    if (cand > run) run = cand;
    f[static_cast<std::size_t>(t)] = run;
  }
  f[static_cast<std::size_t>(l)] = 1;
  return from_cdf_values(l, f);
}

bool gap_hypothesis(const DiscreteDist& g, const DiscreteDist& h, double gamma) {
  for (std::int64_t t = 0; t <= g.lattice(); ++t) {
    Rational gap = g.cdf(t) - h.cdf(t);
    if (gap < 0) return false;
    if (gap.get_d() > std::sqrt((1.0 - g.cdf(t).get_d()) * gamma) + gamma) return false;
  }
  return true;
}

VerificationReport check_approx_sm(Params& p) {
  const Rational gamma_r = p.rational("gamma", Rational(1, 64));
  const auto n = positive(p.integer("n", 4), "n");
  const auto pairs = positive(p.integer("pairs", 200), "pairs");
  const auto prices = positive(p.integer("prices", 10), "prices");
  const auto lattice = static_cast<std::int64_t>(positive(p.integer("lattice", 8), "lattice"));
  const auto seed = static_cast<std::uint64_t>(p.integer("seed", 1));
  p.finish();
  const double gamma = gamma_r.get_d();
  if (!(gamma > 0 && gamma < 1)) throw InvalidInput("gamma must lie in (0, 1)");

  VerificationReport rep;
  rep.lemma = "approx_sm";
  const double lg = std::log(1.0 / gamma), gn = gamma * static_cast<double>(n);
  rep.bound = 7.0 * lg * (gn + std::sqrt(lg * gn));
  rep.bound_description = "Rev_H(p) >= Rev_G(p) - 7 log(1/gamma) (gamma n + sqrt(log(1/gamma) gamma n))";
  SeededRng rng(seed);
  double worst_drop = 0.0;
  for (std::size_t k = 0; k < pairs; ++k) {
    ProductDist g = random_product(n, lattice, static_cast<std::size_t>(lattice) + 1, rng);
    std::vector<DiscreteDist> hs;
    bool hyp = true;
    for (const auto& gi : g.items()) {
      hs.push_back(dominating_neighbour(gi, gamma, rng));
      hyp = hyp && gap_hypothesis(gi, hs.back(), gamma);
    }
    ProductDist h(std::move(hs));
    double margin = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < prices; ++j) {
      PriceVector pv = random_prices(n, lattice, rng);
      double drop = Rational(rev(g, pv) - rev(h, pv)).get_d();
      worst_drop = std::max(worst_drop, drop);
      margin = std::min(margin, rep.bound - drop);
    }
    rep.add("pair " + std::to_string(k), margin, hyp && margin >= 0);
  }
  rep.stats["worst_revenue_drop"] = worst_drop;
  return rep;
}

VerificationReport check_mistake_loss(Params& p) {
  const auto n = p.integer("n", 100);
  const Rational eps = p.rational("eps", Rational(1, 100));
  const auto seed = static_cast<std::uint64_t>(p.integer("seed", 1));
  p.finish();
  SeededRng rng(seed);
  auto inst = make_sample_hard(n, eps, rng);
  const PriceVector good = inst.intended_prices();
  const Rational base = rev(inst.dist, good);

  VerificationReport rep;
  rep.lemma = "mistake_loss";
  const Rational bound = Rational(2, 10) * eps / n;
  rep.bound = bound.get_d();
  rep.bound_description = "correcting one swapped pair gains at least 0.2 eps / n";
  for (std::size_t j = 0; j < inst.pairs.size(); ++j) {
    std::vector<std::int64_t> t = good.ticks();
    std::swap(t[inst.pairs[j].first], t[inst.pairs[j].second]);
    Rational gain = base - rev(inst.dist, PriceVector(2, t));
    Rational margin = gain - bound;
    rep.add("pair " + std::to_string(j), margin.get_d(), margin >= 0);
  }
  rep.stats["pairs"] = static_cast<double>(inst.pairs.size());
  rep.stats["q_star_n"] = inst.q_star_n.get_d();
  rep.stats["revenue"] = base.get_d();
  return rep;
}

VerificationReport check_query_low_loss(Params& p) {
  const auto n = p.integer("n", 8);
  const Rational eps = p.rational("eps", Rational(1, 32));
  const auto seed = static_cast<std::uint64_t>(p.integer("seed", 1));
  const auto multi = static_cast<std::size_t>(p.integer("multi", 200));
  p.finish();
  SeededRng rng(seed);
  auto inst = make_query_hard(n, eps, rng);
  const PriceGrid grid = query_hard_grid(eps);
  const auto ticks = grid.ticks_on(inst.dist.lattice());

  VerificationReport rep;
  rep.lemma = "query_low_loss";
  const Rational step = Rational(1, 4) * eps / n;
  rep.bound = step.get_d();
  rep.bound_description = "exante_rev(p') <= exante_rev(p*) - 0.25 eps / n per coordinate p'_i != p*_i";

  auto opt = exante_optimal(inst.dist, grid);
  const PriceVector star = inst.optimal_prices();
  rep.add_check("argmax equals 1/2 + (k_i + 1) eps", opt.prices == star);
  const Rational best = exante_rev(inst.dist, star);

  for (std::size_t i = 0; i < star.size(); ++i) {
    for (auto t : ticks) {
      if (t == star[i]) continue;
      auto v = star.ticks();
      v[i] = t;
      Rational margin = best - step - exante_rev(inst.dist, PriceVector(star.lattice(), v));
      rep.add("item " + std::to_string(i) + " at " + to_string(ratio(t, star.lattice())),
              margin.get_d(), margin >= 0);
    }
  }
  std::uniform_int_distribution<std::size_t> pick(0, ticks.size() - 1);
  for (std::size_t s = 0; s < multi; ++s) {
    auto v = star.ticks();
    for (auto& x : v) x = ticks[pick(rng)];
    long changed = 0;
    for (std::size_t i = 0; i < v.size(); ++i) changed += v[i] != star[i];
    Rational margin = best - changed * step - exante_rev(inst.dist, PriceVector(star.lattice(), v));
    rep.add("random deviation " + std::to_string(s), margin.get_d(), margin >= 0);
  }
  rep.stats["optimal_exante_revenue"] = best.get_d();
  return rep;
}

VerificationReport check_sum_integral(Params& p) {
  const auto instances = positive(p.integer("instances", 200), "instances");
  const auto n = positive(p.integer("n", 4), "n");
  const auto lattice = static_cast<std::int64_t>(positive(p.integer("lattice", 8), "lattice"));
  const auto seed = static_cast<std::uint64_t>(p.integer("seed", 1));
  p.finish();
  VerificationReport rep;
  rep.lemma = "sum_integral";
  rep.bound_description = "sum_i sum_{theta : S_i(theta) < beta} Pr[v_i = p_i + theta] <= beta + 1";
  SeededRng rng(seed);
  const Rational betas[] = {Rational(1, 4), Rational(1, 2), Rational(1), Rational(2), Rational(3)};
  std::uniform_int_distribution<std::size_t> bpick(0, std::size(betas) - 1);
  for (std::size_t k = 0; k < instances; ++k) {
    ProductDist g = random_product(n, lattice, static_cast<std::size_t>(lattice) + 1, rng);
    PriceVector pv = random_prices(n, lattice, rng);
    const Rational& beta = betas[bpick(rng)];
    Rational margin = beta + 1 - sum_integral_lhs(g, pv, beta);
    rep.add("instance " + std::to_string(k), margin.get_d(), margin >= 0);
  }
  return rep;
}

VerificationReport check_nisan(Params& p) {
  const auto instances = positive(p.integer("instances", 100), "instances");
  const auto prices = positive(p.integer("prices", 50), "prices");
  const Rational eps = p.rational("eps", Rational(1, 8));
  const auto max_n = positive(p.integer("max_n", 3), "max_n");
  const auto max_lattice = positive(p.integer("max_lattice", 12), "max_lattice");
  const auto seed = static_cast<std::uint64_t>(p.integer("seed", 1));
  p.finish();
  VerificationReport rep;
  rep.lemma = "nisan";
  rep.bound = eps.get_d();
  rep.bound_description = "Rev_{discretize(D,eps)}((1 - eps) p) >= Rev_D(p) - eps";
  SeededRng rng(seed);
  std::uniform_int_distribution<std::size_t> npick(1, max_n);
  std::uniform_int_distribution<std::int64_t> lpick(1, static_cast<std::int64_t>(max_lattice));
  for (std::size_t k = 0; k < instances; ++k) {
    const std::int64_t lattice = lpick(rng);
    ProductDist d = random_product(npick(rng), lattice, 4, rng);
    ProductDist dt = discretize(d, eps);
    double margin = std::numeric_limits<double>::infinity();
    bool ok = true;
    for (std::size_t j = 0; j < prices; ++j) {
      PriceVector pv = random_prices(d.size(), lattice, rng);
      Rational m = rev_aligned(dt, scale_prices_refined(pv, eps)) - (rev(d, pv) - eps);
      ok = ok && m >= 0;
      margin = std::min(margin, m.get_d());
    }
    rep.add("instance " + std::to_string(k), margin, ok);
  }
  return rep;
}

VerificationReport check_cdf_bound_lemma(Params& p) {
  const auto n = positive(p.integer("n", 4), "n");
  const auto N = static_cast<std::uint64_t>(positive(p.integer("N", 10000), "N"));
  const double delta = p.real("delta", 0.1);
  const auto trials = positive(p.integer("trials", 200), "trials");
  const auto lattice = static_cast<std::int64_t>(positive(p.integer("lattice", 16), "lattice"));
  const auto seed = static_cast<std::uint64_t>(p.integer("seed", 1));
  p.finish();
  if (!(delta > 0 && delta < 1)) throw InvalidInput("delta must lie in (0, 1)");
  VerificationReport rep;
  rep.lemma = "cdf_bound";
  const double gamma = bernstein_gamma(n, N, delta);
  rep.bound = 1.0 - delta;
  rep.bound_description =
      "fraction of trials with |F_D - F_E| <= sqrt(F_D (1 - F_D) 2 Gamma) + Gamma everywhere >= 1 - delta";
  std::size_t good = 0;
  for (std::size_t t = 0; t < trials; ++t) {
    SeededRng rng(seed_hash({seed, t}));
    ProductDist d = random_product(n, lattice, static_cast<std::size_t>(lattice) + 1, rng);
    SampleOracle oracle(d, rng());
    ProductDist e = empirical_product(d.lattice(), oracle.draw_histograms(N));
    bool all = true;
    for (std::size_t i = 0; i < n; ++i) all = all && check_cdf_bound(d[i], e[i], gamma);
    good += all;
  }
  double rate = static_cast<double>(good) / static_cast<double>(trials);
  rep.add("coverage", rate - rep.bound, rate >= rep.bound);
  rep.stats["gamma"] = gamma;
  rep.stats["coverage"] = rate;
  return rep;
}

std::uint64_t stable_hash(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) h = (h ^ c) * 0x100000001b3ULL;
  return h;
}

VerificationReport check_query_trials(Params& p, const std::string& lemma) {
  const std::string shape = p.text("shape", "all");
  const auto n = positive(p.integer("n", 4), "n");
  const Rational eps = p.rational("eps", Rational(1, 8));
  const double delta = p.real("delta", 0.1);
  const double C = p.real("C", 1000.0);
  const auto trials = positive(p.integer("trials", 200), "trials");
  const auto seed = static_cast<std::uint64_t>(p.integer("seed", 1));
  const auto threads = static_cast<unsigned>(p.integer("threads", 0));
  p.finish();
  std::vector<std::string> shapes;
  if (shape == "all")
    shapes = {"point-mass-1", "uniform", "equal-revenue"};
  else
    shapes = {shape};

  VerificationReport rep;
  rep.lemma = lemma;
  if (lemma == "round_bound") {
    rep.bound = round_bound(n, eps);
    rep.bound_description = "R <= log(10n/eps) / log(1 + 0.1 eps) + 3 whenever every estimate is accurate";
  } else {
    rep.bound = 1.0 - delta;
    rep.bound_description = "fraction of trials with |F_G - F_H| <= eps (1 - F_G) + eps/n >= 1 - delta";
  }
  for (const auto& s : shapes) {
    auto st = run_query_trials(s, n, eps, delta, C, trials, seed_hash({seed, stable_hash(s)}),
                               resolve_threads(threads));
    double acc = static_cast<double>(st.accurate) / static_cast<double>(st.trials);
    rep.stats[s + ".accuracy_rate"] = acc;
    rep.stats[s + ".event_rate"] = static_cast<double>(st.event_holds) / static_cast<double>(st.trials);
    rep.stats[s + ".max_rounds"] = static_cast<double>(st.max_rounds);
    rep.stats[s + ".max_queries"] = static_cast<double>(st.max_queries);
    if (lemma == "round_bound") {
      rep.add(s + " rounds", rep.bound - static_cast<double>(st.max_rounds),
              st.round_bound_ok == st.event_holds);
      rep.add_check(s + " step sandwich", st.sandwich_ok == st.event_holds);
    } else {
      rep.add(s + " accuracy", acc - rep.bound, acc >= rep.bound);
    }
  }
  return rep;
}

}  // namespace

std::vector<std::string> lemma_names() {
  return {"approx_sm", "mistake_loss", "query_low_loss", "sum_integral",
          "nisan",     "cdf_bound",    "round_bound",    "query_accuracy"};
}

VerificationReport verify_lemma(const std::string& name, const LemmaParams& params) {
  Params p(params);
  if (name == "approx_sm") return check_approx_sm(p);
  if (name == "mistake_loss") return check_mistake_loss(p);
  if (name == "query_low_loss") return check_query_low_loss(p);
  if (name == "sum_integral") return check_sum_integral(p);
  if (name == "nisan") return check_nisan(p);
  if (name == "cdf_bound") return check_cdf_bound_lemma(p);
  if (name == "round_bound" || name == "query_accuracy") return check_query_trials(p, name);
  throw InvalidInput("unknown lemma '" + name + "'");
}

std::string export_json(const VerificationReport& r) {
  json cases = json::array();
  for (const auto& c : r.cases)
    cases.push_back({{"name", c.name}, {"passed", c.passed}, {"margin", c.margin}});
  json j = {{"lemma", r.lemma},       {"passed", r.passed},
            {"worst_margin", r.worst_margin}, {"bound", r.bound},
            {"bound_description", r.bound_description}, {"stats", r.stats},
            {"cases", cases}};
  return j.dump(2);
}

DiscreteDist query_test_shape(const std::string& shape, std::size_t n, const Rational& eps) {
  const std::int64_t k = discretization_cells(eps);
  if (shape == "point-mass-1") return DiscreteDist::point_mass(k, k);
  if (shape == "point-mass-0") return DiscreteDist::point_mass(k, 0);
  if (shape == "uniform") {
    std::vector<std::int64_t> s(static_cast<std::size_t>(k) + 1);
    std::vector<Rational> m(s.size(), ratio(1, k + 1));
    for (std::int64_t t = 0; t <= k; ++t) s[static_cast<std::size_t>(t)] = t;
    return DiscreteDist(k, std::move(s), std::move(m));
  }
  if (shape == "equal-revenue") return equal_revenue_H(static_cast<std::int64_t>(n), eps);
  throw InvalidInput("unknown shape '" + shape + "'");
}

QueryTrialStats run_query_trials(const std::string& shape, std::size_t n, const Rational& eps,
                                 double delta, double C, std::size_t trials, std::uint64_t seed,
                                 unsigned threads) {
  const DiscreteDist g = query_test_shape(shape, n, eps);
  const ProductDist hidden(std::vector<DiscreteDist>(n, g));
  const LearnerConfig cfg{eps, delta, C, std::nullopt};
  const double limit = round_bound(n, eps);

  struct Outcome {
    bool accurate, event, rounds_ok, sandwich_ok;
    std::size_t rounds;
    std::uint64_t queries;
  };
  std::vector<Outcome> out(trials);
  parallel_for(trials, threads, [&](std::size_t t) {
    QueryOracle oracle(hidden, seed_hash({seed, t}));
    auto [h, trace] = learn_single_by_queries(oracle, 0, cfg);
    bool event = concentration_event_holds(g, trace, eps, n);
    out[t] = Outcome{query_accuracy_holds(g, h, eps, n), event,
                     static_cast<double>(trace.R) <= limit,
                     step_lengths_sandwiched(g, trace, eps, n), trace.R, oracle.total_queries()};
  });

  QueryTrialStats st;
  st.trials = trials;
  st.round_limit = limit;
  for (const auto& o : out) {
    st.accurate += o.accurate;
    st.max_rounds = std::max(st.max_rounds, o.rounds);
    st.max_queries = std::max(st.max_queries, o.queries);
    if (o.event) {
      ++st.event_holds;
      st.round_bound_ok += o.rounds_ok;
      st.sandwich_ok += o.sandwich_ok;
    }
  }
  return st;
}

}  // namespace bupp
