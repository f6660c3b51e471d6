#include "bupp/rational.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "bupp/error.hpp"

namespace bupp {

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (c < '0' || c > '9') return false;
  return true;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  std::string s(text);
  if (s.empty()) throw InvalidInput("empty rational");
  bool negative = false;
  std::string_view body(s);
  if (body.front() == '-' || body.front() == '+') {
    negative = body.front() == '-';
    body.remove_prefix(1);
  }

  Rational out;
  if (auto slash = body.find('/'); slash != std::string_view::npos) {
    auto num = body.substr(0, slash);
    auto den = body.substr(slash + 1);
    if (!all_digits(num) || !all_digits(den)) throw InvalidInput("bad rational: " + s);
    mpz_class n(std::string(num), 10), d(std::string(den), 10);
    if (d == 0) throw InvalidInput("zero denominator: " + s);
    out = Rational(n, d);
    out.canonicalize();
  } else {
    // decimal with optional exponent
    std::string_view mant = body;
    long exponent = 0;
    if (auto e = body.find_first_of("eE"); e != std::string_view::npos) {
      mant = body.substr(0, e);
      auto ex = body.substr(e + 1);
      bool eneg = false;
      if (!ex.empty() && (ex.front() == '-' || ex.front() == '+')) {
        eneg = ex.front() == '-';
        ex.remove_prefix(1);
      }
      if (!all_digits(ex) || ex.size() > 6) throw InvalidInput("bad exponent: " + s);
      exponent = std::stol(std::string(ex));
      if (eneg) exponent = -exponent;
    }
    std::string digits;
    long frac_digits = 0;
    if (auto dot = mant.find('.'); dot != std::string_view::npos) {
      auto ip = mant.substr(0, dot);
      auto fp = mant.substr(dot + 1);
      if ((!ip.empty() && !all_digits(ip)) || (!fp.empty() && !all_digits(fp)) ||
          (ip.empty() && fp.empty()))
        throw InvalidInput("bad decimal: " + s);
      digits = std::string(ip) + std::string(fp);
      frac_digits = static_cast<long>(fp.size());
    } else {
      if (!all_digits(mant)) throw InvalidInput("bad number: " + s);
      digits = std::string(mant);
    }
    mpz_class n(digits, 10);
    long shift = exponent - frac_digits;
    mpz_class p;
    mpz_ui_pow_ui(p.get_mpz_t(), 10, static_cast<unsigned long>(shift < 0 ? -shift : shift));
    out = shift < 0 ? Rational(n, p) : Rational(n * p);
    out.canonicalize();
  }
  if (negative) out = -out;
  return out;
}

std::string to_string(const Rational& r) {
  if (r.get_den() == 1) return r.get_num().get_str();
  return r.get_str();
}

double to_double(const Rational& r) { return r.get_d(); }

Rational from_double(double x) {
  if (!std::isfinite(x)) throw InvalidInput("non-finite value");
  return Rational(x);
}

std::int64_t checked_lcm(std::int64_t a, std::int64_t b) {
  if (a <= 0 || b <= 0) throw InvalidInput("lattice must be positive");
  std::int64_t g = std::gcd(a, b);
  std::int64_t q = a / g;
  if (q > std::numeric_limits<std::int64_t>::max() / b) throw InvalidInput("lattice overflow");
  return q * b;
}

bool to_ticks(const Rational& r, std::int64_t lattice, std::int64_t& ticks) {
  Rational scaled = r * static_cast<long>(lattice);
  if (scaled.get_den() != 1 || !scaled.get_num().fits_slong_p()) return false;
  ticks = scaled.get_num().get_si();
  return true;
}

}  // namespace bupp
