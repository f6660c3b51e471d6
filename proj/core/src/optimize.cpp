#include "bupp/optimize.hpp"

#include <algorithm>
#include <limits>
#include <optional>
#include <thread>

#include "bupp/error.hpp"

namespace bupp {

PriceGrid::PriceGrid(std::vector<Rational> prices) : prices_(std::move(prices)) {
  if (prices_.empty()) throw InvalidInput("price grid is empty");
  for (auto& p : prices_) {
    p.canonicalize();
    if (p < 0 || p > 1) throw InvalidInput("grid price " + to_string(p) + " outside [0, 1]");
  }
  std::sort(prices_.begin(), prices_.end());
  prices_.erase(std::unique(prices_.begin(), prices_.end()), prices_.end());
}

PriceGrid PriceGrid::multiples_of_eps_sq(const Rational& eps) {
  return lattice_points(discretization_cells(eps));
}

PriceGrid PriceGrid::lattice_points(std::int64_t lattice) {
  if (lattice <= 0) throw InvalidInput("lattice must be positive");
  std::vector<Rational> p;
  p.reserve(static_cast<std::size_t>(lattice) + 1);
  for (std::int64_t t = 0; t <= lattice; ++t) p.push_back(ratio(t, lattice));
  return PriceGrid(std::move(p));
}

std::int64_t PriceGrid::natural_lattice() const {
  std::int64_t l = 1;
  for (const auto& p : prices_) {
    if (!p.get_den().fits_slong_p()) throw InvalidInput("grid denominator too large");
    l = checked_lcm(l, p.get_den().get_si());
  }
  return l;
}

std::vector<std::int64_t> PriceGrid::ticks_on(std::int64_t lattice) const {
  std::vector<std::int64_t> out;
  out.reserve(prices_.size());
  for (const auto& p : prices_) {
    std::int64_t t = 0;
    if (!to_ticks(p, lattice, t))
      throw LatticeMismatch("grid price " + to_string(p) + " is not on lattice 1/" +
                            std::to_string(lattice));
    out.push_back(t);
  }
  return out;
}

namespace {

struct Prepared {
  ProductDist dist;
  std::vector<std::int64_t> ticks;
};

Prepared prepare(const ProductDist& d, const PriceGrid& grid) {
  std::int64_t l = checked_lcm(d.lattice(), grid.natural_lattice());
  Prepared out{l == d.lattice() ? d : d.refined(l), {}};
  out.ticks = grid.ticks_on(l);
  return out;
}

std::uint64_t count_vectors(std::size_t grid_size, std::size_t n, std::uint64_t limit) {
  std::uint64_t total = 1;
  for (std::size_t i = 0; i < n; ++i) {
    if (total > limit / grid_size)
      throw SearchSpaceTooLarge("grid search needs " + std::to_string(grid_size) + "^" +
                                std::to_string(n) + " vectors, limit is " +
                                std::to_string(limit));
    total *= grid_size;
  }
  return total;
}

// Index `code` in mixed radix (first coordinate most significant) so that
// increasing codes enumerate vectors in lexicographic order.
void decode(std::uint64_t code, const std::vector<std::int64_t>& ticks,
            std::vector<std::int64_t>& out) {
  const std::uint64_t g = ticks.size();
  for (std::size_t i = out.size(); i-- > 0;) {
    out[i] = ticks[code % g];
    code /= g;
  }
}

struct Best {
  std::uint64_t code = 0;
  Rational revenue = -1;
};

template <class Objective>
Best scan(std::uint64_t begin, std::uint64_t end, std::size_t n, std::int64_t lattice,
          const std::vector<std::int64_t>& ticks, const Objective& objective) {
  Best best;
  std::vector<std::int64_t> v(n);
  for (std::uint64_t c = begin; c < end; ++c) {
    decode(c, ticks, v);
    Rational r = objective(PriceVector(lattice, v));
    if (r > best.revenue) {
      best.revenue = r;
      best.code = c;
    }
  }
  return best;
}

template <class Objective>
PricingResult exhaustive(const Prepared& prep, SearchLimits limits, const Objective& objective) {
  const std::size_t n = prep.dist.size();
  const std::int64_t lattice = prep.dist.lattice();
  const std::uint64_t total = count_vectors(prep.ticks.size(), n, limits.max_vectors);

  unsigned threads = std::max(1u, limits.threads);
  if (total < 64 * static_cast<std::uint64_t>(threads)) threads = 1;

  std::vector<Best> partial(threads);
  if (threads == 1) {
    partial[0] = scan(0, total, n, lattice, prep.ticks, objective);
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) {
      std::uint64_t b = total * t / threads, e = total * (t + 1) / threads;
      pool.emplace_back([&, t, b, e] { partial[t] = scan(b, e, n, lattice, prep.ticks, objective); });
    }
    for (auto& th : pool) th.join();
  }

  // chunks are in code order, so strict improvement keeps the smallest code
  Best best = partial[0];
  for (unsigned t = 1; t < threads; ++t)
    if (partial[t].revenue > best.revenue) best = partial[t];

  std::vector<std::int64_t> v(n);
  decode(best.code, prep.ticks, v);
  return PricingResult{PriceVector(lattice, std::move(v)), best.revenue};
}

}  // namespace

PricingResult optimal_bruteforce(const ProductDist& d, const PriceGrid& grid, SearchLimits limits) {
  auto prep = prepare(d, grid);
  const ProductDist& dist = prep.dist;
  return exhaustive(prep, limits, [&](const PriceVector& p) { return rev(dist, p); });
}

Rational two_price_revenue(std::int64_t n, const Rational& q) {
  if (n < 1) throw InvalidInput("n must be positive");
  if (q < 0 || q > 1) throw InvalidInput("q must lie in [0, 1]");
  Rational qn = q * n;
  if (qn.get_den() != 1) throw InvalidInput("q*n must be an integer");
  const unsigned long m = qn.get_num().get_ui();
  const unsigned long un = static_cast<unsigned long>(n);

  const Rational a = 1 - ratio(1, 2 * n);
  const Rational b = 1 - ratio(3, 2 * n);
  auto power = [](const Rational& base, unsigned long e) {
    mpz_class num, den;
    mpz_pow_ui(num.get_mpz_t(), base.get_num().get_mpz_t(), e);
    mpz_pow_ui(den.get_mpz_t(), base.get_den().get_mpz_t(), e);
    Rational r(num, den);
    r.canonicalize();
    return r;
  };
  Rational one = power(a, m) - power(a, un);
  Rational zero = power(a, un - m) * power(b, m);
  return one + (1 - one - zero) / 2;
}

TwoPriceOptimum optimal_two_price(std::int64_t n) {
  if (n < 2) throw InvalidInput("n must be at least 2");
  const std::size_t un = static_cast<std::size_t>(n);
  const Rational a = 1 - ratio(1, 2 * n);
  const Rational b = 1 - ratio(3, 2 * n);
  std::vector<Rational> pa(un + 1), pb(un + 1);
  pa[0] = 1;
  pb[0] = 1;
  for (std::size_t k = 1; k <= un; ++k) {
    pa[k] = pa[k - 1] * a;
    pb[k] = pb[k - 1] * b;
  }
  TwoPriceOptimum best{Rational(0), Rational(-1)};
  for (std::size_t m = 0; m <= un; ++m) {
    Rational one = pa[m] - pa[un];
    Rational zero = pa[un - m] * pb[m];
    Rational r = one + (1 - one - zero) / 2;
    if (r > best.revenue) best = {ratio(static_cast<std::int64_t>(m), n), r};
  }
  return best;
}

PricingResult coordinate_ascent(const ProductDist& d, const PriceGrid& grid, std::size_t starts,
                                SeededRng& rng) {
  if (starts == 0) throw InvalidInput("need at least one start");
  auto prep = prepare(d, grid);
  const std::size_t n = prep.dist.size();
  const std::int64_t lattice = prep.dist.lattice();
  const auto& ticks = prep.ticks;
  std::uniform_int_distribution<std::size_t> pick(0, ticks.size() - 1);

  std::optional<PricingResult> best;
  for (std::size_t s = 0; s < starts; ++s) {
    std::vector<std::int64_t> v(n);
    for (auto& x : v) x = ticks[pick(rng)];
    Rational current = rev(prep.dist, PriceVector(lattice, v));
    bool improved = true;
    while (improved) {
      improved = false;
      for (std::size_t i = 0; i < n; ++i) {
        std::int64_t keep = v[i], arg = v[i];
        Rational top = current;
        for (auto t : ticks) {
          if (t == keep) continue;
          v[i] = t;
          Rational r = rev(prep.dist, PriceVector(lattice, v));
          if (r > top) {
            top = r;
            arg = t;
          }
        }
        v[i] = arg;
        if (arg != keep) {
          current = top;
          improved = true;
        }
      }
    }
    PriceVector p(lattice, v);
    if (!best || current > best->revenue || (current == best->revenue && p < best->prices))
      best = PricingResult{std::move(p), current};
  }
  return *best;
}

PricingResult exante_optimal(const ProductDist& d, const PriceGrid& grid, SearchLimits limits) {
  auto prep = prepare(d, grid);
  const ProductDist& dist = prep.dist;
  const std::size_t n = dist.size();

  std::vector<std::int64_t> monopoly(n);
  Rational sold = 0;
  for (std::size_t i = 0; i < n; ++i) {
    Rational top = -1, top_q = 0;
    for (auto t : prep.ticks) {
      Rational q = 1 - dist[i].cdf_left(t);
      Rational r = q * ratio(t, dist.lattice());
      // among equal revenues the highest price sells least, keeping slack
      if (r > top || (r == top && q <= top_q)) {
        top = r;
        top_q = q;
        monopoly[i] = t;
      }
    }
    sold += top_q;
  }
  if (sold <= 1) {
    PriceVector p(dist.lattice(), std::move(monopoly));
    Rational r = exante_rev(dist, p);
    return PricingResult{std::move(p), std::move(r)};
  }
  return exhaustive(prep, limits, [&](const PriceVector& p) { return exante_rev(dist, p); });
}

Optimizer bruteforce_optimizer(PriceGrid grid, SearchLimits limits) {
  return [grid = std::move(grid), limits](const ProductDist& d) {
    return optimal_bruteforce(d, grid, limits);
  };
}

Optimizer coordinate_optimizer(PriceGrid grid, std::size_t starts, std::uint64_t seed) {
  return [grid = std::move(grid), starts, seed](const ProductDist& d) {
    SeededRng rng(seed);
    return coordinate_ascent(d, grid, starts, rng);
  };
}

}  // namespace bupp
