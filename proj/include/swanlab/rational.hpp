#pragma once

// Exact rationals and the error type shared by the whole library.

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace swanlab {

using Rational = mpq_class;
using Integer = mpz_class;

enum class ErrorKind {
  usage,        // bad command line or API misuse
  parse,        // lexical/syntax errors in module descriptions
  unsupported,  // input outside the supported class (p-divisible support, ...)
  invariant,    // a checked mathematical invariant failed
  domain,       // division by zero, empty input, and similar
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
  throw Error(kind, what);
}

inline Rational make_rational(long num, long den = 1) {
  Rational q(num, den);
  q.canonicalize();
  return q;
}

inline bool is_integer(const Rational& q) { return q.get_den() == 1; }

inline bool is_prime(long p) {
  if (p < 2) return false;
  for (long d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

/// p-adic valuation of a nonzero integer.
inline long padic_valuation(const Integer& n, long p) {
  if (n == 0) fail(ErrorKind::domain, "p-adic valuation of zero");
  Integer m = abs(n);
  long v = 0;
  while (mpz_divisible_ui_p(m.get_mpz_t(), static_cast<unsigned long>(p))) {
    m /= p;
    ++v;
  }
  return v;
}

/// p-adic valuation of a nonzero rational, normalized so that v(p) = 1.
inline long padic_valuation(const Rational& q, long p) {
  return padic_valuation(q.get_num(), p) - padic_valuation(q.get_den(), p);
}

/// v_p(n!) by Legendre's formula.
inline long factorial_valuation(long n, long p) {
  long v = 0;
  for (long q = p; q <= n; q *= p) v += n / q;
  return v;
}

/// Always "num/den", including integers ("5/1").
inline std::string to_string(const Rational& q) {
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

inline std::string to_string(const std::vector<Rational>& v,
                             std::string_view sep = ",") {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += sep;
    out += to_string(v[i]);
  }
  return out;
}

/// Parses "a", "-a", "a/b". Returns nullopt on malformed input or zero
/// denominator.
inline std::optional<Rational> parse_rational(std::string_view s) {
  auto trim = [](std::string_view t) {
    while (!t.empty() && (t.front() == ' ' || t.front() == '\t')) t.remove_prefix(1);
    while (!t.empty() && (t.back() == ' ' || t.back() == '\t')) t.remove_suffix(1);
    return t;
  };
  s = trim(s);
  auto valid_int = [](std::string_view t, bool allow_sign) {
    if (t.empty()) return false;
    std::size_t i = 0;
    if (allow_sign && (t[0] == '-' || t[0] == '+')) i = 1;
    if (i == t.size()) return false;
    for (; i < t.size(); ++i)
      if (t[i] < '0' || t[i] > '9') return false;
    return true;
  };
  auto slash = s.find('/');
  std::string num(s.substr(0, slash));
  std::string den = slash == std::string_view::npos ? "1" : std::string(s.substr(slash + 1));
  if (!valid_int(num, true) || !valid_int(den, false)) return std::nullopt;
  if (num[0] == '+') num.erase(0, 1);
  Integer n(num), d(den);
  if (d == 0) return std::nullopt;
  Rational q(n, d);
  q.canonicalize();
  return q;
}

inline Rational rational_or_throw(std::string_view s) {
  auto q = parse_rational(s);
  if (!q) fail(ErrorKind::parse, "malformed rational '" + std::string(s) + "'");
  return *q;
}

inline Integer lcm_of_denominators(const std::vector<Rational>& xs) {
  Integer l = 1;
  for (const auto& x : xs) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), x.get_den_mpz_t());
  return l;
}

/// Membership of `value` in the additive group Z + Z x_1 + ... + Z x_n.
/// That group is (1/L) Z with L the lcm of the reduced denominators of the x_i.
inline bool in_lattice(const Rational& value, const std::vector<Rational>& generators) {
  Rational scaled = value * Rational(lcm_of_denominators(generators));
  scaled.canonicalize();
  return is_integer(scaled);
}

inline Rational factorial(long n) {
  Integer f = 1;
  for (long k = 2; k <= n; ++k) f *= k;
  return Rational(f);
}

}  // namespace swanlab
