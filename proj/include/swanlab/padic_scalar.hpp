#pragma once

// The coefficient field K = Q(pi), pi^(p-1) = -p, with its p-adic valuation.

#include <swanlab/rational.hpp>

#include <algorithm>
#include <compare>
#include <ostream>
#include <utility>
#include <vector>

namespace swanlab {

/// A rational number or +infinity. Valuations of zero are infinite.
class Valuation {
 public:
  Valuation() : infinite_(true) {}
  Valuation(Rational v) : infinite_(false), value_(std::move(v)) {}  // NOLINT
  static Valuation infinity() { return Valuation(); }

  bool is_infinite() const { return infinite_; }
  const Rational& value() const {
    if (infinite_) fail(ErrorKind::domain, "value() of an infinite valuation");
    return value_;
  }

  friend bool operator==(const Valuation& a, const Valuation& b) {
    if (a.infinite_ || b.infinite_) return a.infinite_ == b.infinite_;
    return a.value_ == b.value_;
  }
  friend bool operator<(const Valuation& a, const Valuation& b) {
    if (a.infinite_) return false;
    if (b.infinite_) return true;
    return a.value_ < b.value_;
  }
  friend bool operator<=(const Valuation& a, const Valuation& b) { return !(b < a); }
  friend bool operator>(const Valuation& a, const Valuation& b) { return b < a; }
  friend bool operator>=(const Valuation& a, const Valuation& b) { return !(a < b); }
  friend Valuation operator+(const Valuation& a, const Valuation& b) {
    if (a.infinite_ || b.infinite_) return Valuation();
    return Valuation(a.value_ + b.value_);
  }

  std::string str() const { return infinite_ ? "inf" : to_string(value_); }

 private:
  bool infinite_;
  Rational value_;
};

inline std::ostream& operator<<(std::ostream& os, const Valuation& v) { return os << v.str(); }

/// Element sum_{m < p-1} c_m pi^m of K. Always stored reduced.
class PadicScalar {
 public:
  explicit PadicScalar(long p = 2) : p_(p), coeffs_(static_cast<std::size_t>(p - 1)) {
    if (!is_prime(p)) fail(ErrorKind::domain, "PadicScalar: " + std::to_string(p) + " is not prime");
  }
  PadicScalar(long p, const Rational& q) : PadicScalar(p) { coeffs_[0] = q; }
  PadicScalar(long p, std::vector<Rational> coeffs) : PadicScalar(p) {
    // accept any length and reduce
    std::vector<Rational> c = std::move(coeffs);
    reduce_into(c);
  }

  static PadicScalar pi(long p) { return pi_power(p, 1); }
  static PadicScalar pi_power(long p, long k) {
    std::vector<Rational> c(static_cast<std::size_t>(k + 1));
    c[static_cast<std::size_t>(k)] = 1;
    return PadicScalar(p, std::move(c));
  }

  long prime() const { return p_; }
  const std::vector<Rational>& coeffs() const { return coeffs_; }

  bool is_zero() const {
    return std::all_of(coeffs_.begin(), coeffs_.end(), [](const Rational& c) { return c == 0; });
  }
  bool is_rational() const {
    return std::all_of(coeffs_.begin() + 1, coeffs_.end(), [](const Rational& c) { return c == 0; });
  }

  /// v(sum c_m pi^m) = min_m (v_p(c_m) + m/(p-1)); the fractional parts m/(p-1)
  /// are distinct, so no cancellation can occur.
  Valuation valuation() const {
    Valuation best;
    for (std::size_t m = 0; m < coeffs_.size(); ++m) {
      if (coeffs_[m] == 0) continue;
      Valuation v(Rational(padic_valuation(coeffs_[m], p_)) +
                  make_rational(static_cast<long>(m), p_ - 1));
      if (v < best) best = v;
    }
    return best;
  }

  PadicScalar operator-() const {
    PadicScalar r(*this);
    for (auto& c : r.coeffs_) c = -c;
    return r;
  }
  PadicScalar& operator+=(const PadicScalar& o) {
    check_same(o);
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
    return *this;
  }
  PadicScalar& operator-=(const PadicScalar& o) {
    check_same(o);
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= o.coeffs_[i];
    return *this;
  }
  PadicScalar& operator*=(const PadicScalar& o) {
    check_same(o);
    std::vector<Rational> prod(2 * coeffs_.size());
    for (std::size_t i = 0; i < coeffs_.size(); ++i) {
      if (coeffs_[i] == 0) continue;
      for (std::size_t j = 0; j < o.coeffs_.size(); ++j) prod[i + j] += coeffs_[i] * o.coeffs_[j];
    }
    reduce_into(prod);
    return *this;
  }
  PadicScalar& operator*=(const Rational& q) {
    for (auto& c : coeffs_) c *= q;
    return *this;
  }
  PadicScalar& operator/=(const PadicScalar& o) { return *this *= o.inverse(); }

  friend PadicScalar operator+(PadicScalar a, const PadicScalar& b) { return a += b; }
  friend PadicScalar operator-(PadicScalar a, const PadicScalar& b) { return a -= b; }
  friend PadicScalar operator*(PadicScalar a, const PadicScalar& b) { return a *= b; }
  friend PadicScalar operator*(PadicScalar a, const Rational& q) { return a *= q; }
  friend PadicScalar operator*(const Rational& q, PadicScalar a) { return a *= q; }
  friend PadicScalar operator/(PadicScalar a, const PadicScalar& b) { return a /= b; }
  friend bool operator==(const PadicScalar& a, const PadicScalar& b) {
    return a.p_ == b.p_ && a.coeffs_ == b.coeffs_;
  }

  /// Inverse in K. Solves (multiplication by x) * y = 1 over Q.
  PadicScalar inverse() const {
    if (is_zero()) fail(ErrorKind::domain, "division by zero in K");
    const std::size_t n = coeffs_.size();
    if (is_rational()) return PadicScalar(p_, Rational(1) / coeffs_[0]);
    // column j of A is x * pi^j
    std::vector<std::vector<Rational>> a(n, std::vector<Rational>(n + 1));
    for (std::size_t j = 0; j < n; ++j) {
      PadicScalar col = *this * pi_power(p_, static_cast<long>(j));
      for (std::size_t i = 0; i < n; ++i) a[i][j] = col.coeffs_[i];
    }
    a[0][n] = 1;
    for (std::size_t c = 0; c < n; ++c) {
      std::size_t piv = c;
      while (piv < n && a[piv][c] == 0) ++piv;
      if (piv == n) fail(ErrorKind::domain, "singular multiplication matrix in K");
      std::swap(a[piv], a[c]);
      for (std::size_t r = 0; r < n; ++r) {
        if (r == c || a[r][c] == 0) continue;
        Rational f = a[r][c] / a[c][c];
        for (std::size_t k = c; k <= n; ++k) a[r][k] -= f * a[c][k];
      }
    }
    std::vector<Rational> y(n);
    for (std::size_t i = 0; i < n; ++i) y[i] = a[i][n] / a[i][i];
    return PadicScalar(p_, std::move(y));
  }

  /// "c0 + c1*pi + c2*pi^2", zero terms omitted; zero is "0/1".
  std::string str() const {
    std::string out;
    for (std::size_t m = 0; m < coeffs_.size(); ++m) {
      if (coeffs_[m] == 0) continue;
      if (!out.empty()) out += " + ";
      out += to_string(coeffs_[m]);
      if (m == 1) out += "*pi";
      if (m > 1) out += "*pi^" + std::to_string(m);
    }
    return out.empty() ? "0/1" : out;
  }

 private:
  void check_same(const PadicScalar& o) const {
    if (o.p_ != p_) fail(ErrorKind::domain, "mixing scalars over different primes");
  }
  // pi^(p-1) = -p, applied from the top degree down.
  void reduce_into(std::vector<Rational>& c) {
    const std::size_t n = static_cast<std::size_t>(p_ - 1);
    for (std::size_t k = c.size(); k-- > n;) {
      if (c[k] == 0) continue;
      c[k - n] -= Rational(p_) * c[k];
      c[k] = 0;
    }
    coeffs_.assign(n, Rational(0));
    for (std::size_t k = 0; k < std::min(n, c.size()); ++k) coeffs_[k] = c[k];
  }

  long p_;
  std::vector<Rational> coeffs_;
};

inline std::ostream& operator<<(std::ostream& os, const PadicScalar& x) { return os << x.str(); }

}  // namespace swanlab
