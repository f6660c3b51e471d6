#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace bupp {

/// Exact rational number. Probabilities, CDF values and revenues are all
/// carried as reduced fractions of arbitrary precision.
using Rational = mpq_class;

/// Parses "3", "-3/4", "0.125" or "1e-2" into an exact rational.
/// Decimal notation is interpreted exactly (0.1 == 1/10).
Rational parse_rational(std::string_view text);

/// "num/den", or "num" when the denominator is 1.
std::string to_string(const Rational& r);

double to_double(const Rational& r);

/// Exact binary value of a finite double.
Rational from_double(double x);

std::int64_t checked_lcm(std::int64_t a, std::int64_t b);

/// Returns true and writes `ticks` when r == ticks / lattice exactly.
bool to_ticks(const Rational& r, std::int64_t lattice, std::int64_t& ticks);

inline Rational ratio(std::int64_t num, std::int64_t den) {
  Rational r(mpz_class(static_cast<long>(num)), mpz_class(static_cast<long>(den)));
  r.canonicalize();
  return r;
}

}  // namespace bupp
