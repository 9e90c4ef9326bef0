#pragma once

// Ordered scalar types used to evaluate things "just to the right of zero".
//
// A Germ<W> is value + slope * c for an infinitesimal c > 0; comparison is
// lexicographic. The slope lives in W, which is either Rational (ordinary
// weights) or AffineRho (weights that are themselves affine in a second
// infinitesimal rho > 0, used for right slopes at r = 0).

#include <swanlab/rational.hpp>

#include <ostream>
#include <string>

namespace swanlab {

/// a + b*rho with rho -> 0+, ordered lexicographically.
struct AffineRho {
  Rational constant;
  Rational rho;

  AffineRho() = default;
  AffineRho(Rational a, Rational b = 0) : constant(std::move(a)), rho(std::move(b)) {}  // NOLINT
  AffineRho(long a) : constant(a), rho(0) {}  // NOLINT

  AffineRho& operator+=(const AffineRho& o) {
    constant += o.constant;
    rho += o.rho;
    return *this;
  }
  AffineRho& operator-=(const AffineRho& o) {
    constant -= o.constant;
    rho -= o.rho;
    return *this;
  }
  AffineRho operator-() const { return AffineRho(-constant, -rho); }
  friend AffineRho operator+(AffineRho a, const AffineRho& b) { return a += b; }
  friend AffineRho operator-(AffineRho a, const AffineRho& b) { return a -= b; }
  friend AffineRho operator*(const AffineRho& a, const Rational& q) {
    return AffineRho(a.constant * q, a.rho * q);
  }
  friend AffineRho operator*(const Rational& q, const AffineRho& a) { return a * q; }
  friend AffineRho operator/(const AffineRho& a, const Rational& q) {
    return AffineRho(a.constant / q, a.rho / q);
  }
  friend bool operator==(const AffineRho& a, const AffineRho& b) {
    return a.constant == b.constant && a.rho == b.rho;
  }
  friend bool operator!=(const AffineRho& a, const AffineRho& b) { return !(a == b); }
  friend bool operator<(const AffineRho& a, const AffineRho& b) {
    if (a.constant != b.constant) return a.constant < b.constant;
    return a.rho < b.rho;
  }
  friend bool operator>(const AffineRho& a, const AffineRho& b) { return b < a; }
  friend bool operator<=(const AffineRho& a, const AffineRho& b) { return !(b < a); }
  friend bool operator>=(const AffineRho& a, const AffineRho& b) { return !(a < b); }

  Rational at(const Rational& r) const { return constant + rho * r; }
};

inline std::string to_string(const AffineRho& a) {
  return to_string(a.constant) + " + " + to_string(a.rho) + "*r";
}
inline std::ostream& operator<<(std::ostream& os, const AffineRho& a) { return os << to_string(a); }

template <class W>
struct Germ {
  Rational value;
  W slope;

  Germ() : value(0), slope(W(0)) {}
  Germ(Rational v, W s) : value(std::move(v)), slope(std::move(s)) {}

  friend Germ operator+(const Germ& a, const Germ& b) {
    return Germ(a.value + b.value, W(a.slope + b.slope));
  }
  friend Germ operator-(const Germ& a, const Germ& b) {
    return Germ(a.value - b.value, W(a.slope - b.slope));
  }
  Germ operator-() const { return Germ(-value, W(-slope)); }
  friend Germ operator/(const Germ& a, const Rational& q) {
    return Germ(a.value / q, W(a.slope / q));
  }
  friend bool operator==(const Germ& a, const Germ& b) {
    return a.value == b.value && a.slope == b.slope;
  }
  friend bool operator!=(const Germ& a, const Germ& b) { return !(a == b); }
  friend bool operator<(const Germ& a, const Germ& b) {
    if (a.value != b.value) return a.value < b.value;
    return a.slope < b.slope;
  }
  friend bool operator>(const Germ& a, const Germ& b) { return b < a; }
  friend bool operator<=(const Germ& a, const Germ& b) { return !(b < a); }
  friend bool operator>=(const Germ& a, const Germ& b) { return !(a < b); }
};

template <class W>
std::string to_string(const Germ<W>& g) {
  using swanlab::to_string;
  return "(" + to_string(g.value) + " | " + to_string(g.slope) + ")";
}

}  // namespace swanlab
