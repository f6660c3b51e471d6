#include "bupp/instances.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "bupp/error.hpp"
#include "bupp/learn.hpp"

namespace bupp {

DiscreteDist base_G(std::int64_t n) {
  if (n < 2) throw InvalidInput("n must be at least 2");
  return DiscreteDist(2, {0, 1, 2}, {1 - ratio(3, 2 * n), ratio(1, n), ratio(1, 2 * n)});
}

DiscreteDist perturbed_GL(std::int64_t n, const Rational& eps) {
  if (n < 2) throw InvalidInput("n must be at least 2");
  if (eps < 0 || eps >= Rational(1, 2)) throw InvalidInput("eps must lie in [0, 1/2)");
  Rational top = (Rational(1, 2) - eps) / n;
  Rational mid = (1 + eps) / n;
  return DiscreteDist(2, {0, 1, 2}, {1 - ratio(3, 2 * n), mid, top});
}

PriceVector SampleHardInstance::intended_prices() const {
  std::vector<std::int64_t> t(dist.size(), 2);
  for (const auto& p : pairs) t[p.low] = 1;
  return PriceVector(2, std::move(t));
}

SampleHardInstance make_sample_hard(std::int64_t n, const Rational& eps, std::size_t pairs,
                                    SeededRng& rng) {
  if (n < 2) throw InvalidInput("n must be at least 2");
  if (pairs == 0 || pairs > static_cast<std::size_t>(n / 2))
    throw InvalidInput("pair count must lie in [1, n/2]");
  const DiscreteDist g = base_G(n), gl = perturbed_GL(n, eps);
  std::vector<DiscreteDist> items(static_cast<std::size_t>(n), g);
  std::vector<ItemPair> out;
  std::bernoulli_distribution coin(0.5);
  for (std::size_t j = 0; j < pairs; ++j) {
    ItemPair p{2 * j, 2 * j + 1, coin(rng) ? 2 * j : 2 * j + 1};
    items[p.low] = gl;
    out.push_back(p);
  }
  return SampleHardInstance{ProductDist(std::move(items)), std::move(out), n, eps,
                            ratio(static_cast<std::int64_t>(pairs), n)};
}

SampleHardInstance make_sample_hard(std::int64_t n, const Rational& eps, SeededRng& rng) {
  auto opt = optimal_two_price(n);
  Rational count = opt.q * n;
  auto pairs = std::clamp<std::int64_t>(count.get_num().get_si(), 1, n / 2);
  auto inst = make_sample_hard(n, eps, static_cast<std::size_t>(pairs), rng);
  inst.q_star_n = opt.q;
  return inst;
}

PriceGrid sample_hard_grid() { return PriceGrid({Rational(1, 2), Rational(1)}); }

namespace {

std::int64_t quarter_steps(const Rational& eps) {
  if (eps <= 0 || eps > Rational(1, 4)) throw InvalidInput("eps must lie in (0, 1/4]");
  Rational m = 1 / (4 * eps);
  if (m.get_den() != 1 || !m.get_num().fits_slong_p())
    throw InvalidInput("eps must be of the form 1/(4m)");
  return m.get_num().get_si();
}

}  // namespace

DiscreteDist equal_revenue_H(std::int64_t n, const Rational& eps) {
  if (n < 2) throw InvalidInput("n must be at least 2");
  const std::int64_t m = quarter_steps(eps);
  const std::int64_t lattice = 4 * m;
  // tail(k) = 1 / (n (1 + 2k eps)) = 2m / (n (2m + k))
  auto tail = [&](std::int64_t k) { return ratio(2 * m, n * (2 * m + k)); };
  std::vector<std::int64_t> support{0};
  std::vector<Rational> masses{1 - tail(0)};
  for (std::int64_t k = 0; k <= m; ++k) {
    support.push_back(2 * m + k);
    masses.push_back(k < m ? tail(k) - tail(k + 1) : tail(k));
  }
  return DiscreteDist(lattice, std::move(support), std::move(masses));
}

PriceVector QueryHardInstance::optimal_prices() const {
  const std::int64_t m = quarter_steps(eps);
  std::vector<std::int64_t> t;
  t.reserve(hidden_k.size());
  for (auto k : hidden_k) t.push_back(2 * m + k + 1);
  return PriceVector(4 * m, std::move(t));
}

QueryHardInstance make_query_hard(std::int64_t n, const Rational& eps,
                                  std::vector<std::int64_t> hidden_k) {
  const std::int64_t m = quarter_steps(eps);
  if (hidden_k.size() != static_cast<std::size_t>(n))
    throw InvalidInput("need one perturbation index per item");
  const DiscreteDist h = equal_revenue_H(n, eps);
  std::vector<DiscreteDist> items;
  for (auto k : hidden_k) {
    if (k < 0 || k >= m) throw InvalidInput("perturbation index out of range");
    std::vector<std::int64_t> s(h.support().begin(), h.support().end());
    std::vector<Rational> w(h.masses().begin(), h.masses().end());
    // support is {0, 2m, 2m+1, ..., 3m}, so value 2m+k sits at position k+1
    std::size_t at = static_cast<std::size_t>(k) + 1;
    w[at + 1] += w[at];
    w[at] = 0;
    items.emplace_back(4 * m, std::move(s), std::move(w));
  }
  return QueryHardInstance{ProductDist(std::move(items)), std::move(hidden_k), n, eps};
}

QueryHardInstance make_query_hard(std::int64_t n, const Rational& eps, SeededRng& rng) {
  const std::int64_t m = quarter_steps(eps);
  std::uniform_int_distribution<std::int64_t> pick(0, m - 1);
  std::vector<std::int64_t> k(static_cast<std::size_t>(n));
  for (auto& x : k) x = pick(rng);
  return make_query_hard(n, eps, std::move(k));
}

PriceGrid query_hard_grid(const Rational& eps) {
  const std::int64_t m = quarter_steps(eps);
  std::vector<Rational> p;
  for (std::int64_t k = 0; k <= m; ++k) p.push_back(ratio(2 * m + k, 4 * m));
  return PriceGrid(std::move(p));
}

NonMonotonicityExample nonmonotonicity_example() {
  DiscreteDist a = DiscreteDist::point_mass(10, 5);
  DiscreteDist a_tilde(10, {5, 6}, {Rational(9, 10), Rational(1, 10)});
  DiscreteDist b(10, {0, 10}, {Rational(1, 2), Rational(1, 2)});
  return {ProductDist({a, b}), ProductDist({a_tilde, b})};
}

ProductDist random_product(std::size_t n, std::int64_t lattice, std::size_t max_support,
                           SeededRng& rng) {
  if (n == 0 || lattice <= 0 || max_support == 0) throw InvalidInput("bad random instance shape");
  std::vector<std::int64_t> all(static_cast<std::size_t>(lattice) + 1);
  std::iota(all.begin(), all.end(), 0);
  std::size_t cap = std::min(max_support, all.size());
  std::uniform_int_distribution<std::size_t> size_pick(1, cap);
  std::uniform_int_distribution<std::int64_t> weight(1, 10);
  std::vector<DiscreteDist> items;
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t k = size_pick(rng);
    std::shuffle(all.begin(), all.end(), rng);
    std::vector<std::int64_t> s(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(k));
    std::vector<std::int64_t> w(k);
    std::int64_t total = 0;
    for (auto& x : w) total += (x = weight(rng));
    std::vector<Rational> m;
    for (auto x : w) m.push_back(ratio(x, total));
    items.emplace_back(lattice, std::move(s), std::move(m));
  }
  return ProductDist(std::move(items));
}

double misidentified_pair_fraction(const SampleHardInstance& inst, std::uint64_t samples,
                                   SeededRng& rng) {
  SampleOracle oracle(inst.dist, rng());
  auto hist = oracle.draw_histograms(samples);
  auto count = [&](std::size_t item, std::int64_t tick) -> double {
    const auto& h = hist[item];
    for (std::size_t k = 0; k < h.values.size(); ++k)
      if (h.values[k] == tick) return static_cast<double>(h.counts[k]);
    return 0.0;
  };
  const double e = inst.eps.get_d();
  const double w_top = std::log1p(-2 * e), w_mid = std::log1p(e);
  std::bernoulli_distribution coin(0.5);
  std::size_t wrong = 0;
  for (const auto& p : inst.pairs) {
    // log-likelihood ratio of "first is G^L" against "second is G^L"
    double llr = (count(p.first, 2) - count(p.second, 2)) * w_top +
                 (count(p.first, 1) - count(p.second, 1)) * w_mid;
    bool guess_first = llr > 0 || (llr == 0 && coin(rng));
    if ((guess_first ? p.first : p.second) != p.low) ++wrong;
  }
  return static_cast<double>(wrong) / static_cast<double>(inst.pairs.size());
}

}  // namespace bupp
