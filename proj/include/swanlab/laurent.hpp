#pragma once

// Laurent polynomials over K in n variables, formal derivations, and weighted
// Gauss valuations.

#include <swanlab/germ.hpp>
#include <swanlab/padic_scalar.hpp>
#include <swanlab/piecewise_affine.hpp>

#include <map>
#include <string>
#include <utility>
#include <vector>

namespace swanlab {

using Exponent = std::vector<long>;
using WeightVector = std::vector<Rational>;

template <class W>
W pairing(const std::vector<W>& r, const Exponent& j) {
  W acc = W(0);
  for (std::size_t i = 0; i < j.size(); ++i)
    if (j[i] != 0) acc = W(acc + r[i] * Rational(j[i]));
  return acc;
}

class LaurentElement {
 public:
  using Terms = std::map<Exponent, PadicScalar>;

  LaurentElement() = default;
  LaurentElement(long p, std::size_t nvars) : p_(p), nvars_(nvars) {}

  static LaurentElement constant(long p, std::size_t nvars, const PadicScalar& c) {
    LaurentElement f(p, nvars);
    f.add_term(Exponent(nvars, 0), c);
    return f;
  }
  static LaurentElement constant(long p, std::size_t nvars, const Rational& c) {
    return constant(p, nvars, PadicScalar(p, c));
  }
  static LaurentElement monomial(long p, const Exponent& j, const PadicScalar& c) {
    LaurentElement f(p, j.size());
    f.add_term(j, c);
    return f;
  }
  static LaurentElement monomial(long p, const Exponent& j, const Rational& c = 1) {
    return monomial(p, j, PadicScalar(p, c));
  }

  long prime() const { return p_; }
  std::size_t nvars() const { return nvars_; }
  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  void add_term(const Exponent& j, const PadicScalar& c) {
    if (j.size() != nvars_) fail(ErrorKind::domain, "exponent length does not match nvars");
    if (c.is_zero()) return;
    auto it = terms_.find(j);
    if (it == terms_.end()) {
      terms_.emplace(j, c);
      return;
    }
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }

  PadicScalar coefficient(const Exponent& j) const {
    auto it = terms_.find(j);
    return it == terms_.end() ? PadicScalar(p_) : it->second;
  }

  LaurentElement& operator+=(const LaurentElement& g) {
    check_same(g);
    for (const auto& [j, c] : g.terms_) add_term(j, c);
    return *this;
  }
  LaurentElement& operator-=(const LaurentElement& g) {
    check_same(g);
    for (const auto& [j, c] : g.terms_) add_term(j, -c);
    return *this;
  }
  LaurentElement operator-() const {
    LaurentElement r(p_, nvars_);
    for (const auto& [j, c] : terms_) r.terms_.emplace(j, -c);
    return r;
  }
  friend LaurentElement operator+(LaurentElement a, const LaurentElement& b) { return a += b; }
  friend LaurentElement operator-(LaurentElement a, const LaurentElement& b) { return a -= b; }
  friend LaurentElement operator*(const LaurentElement& a, const LaurentElement& b) {
    a.check_same(b);
    LaurentElement r(a.p_, a.nvars_);
    Exponent j(a.nvars_);
    for (const auto& [ja, ca] : a.terms_)
      for (const auto& [jb, cb] : b.terms_) {
        for (std::size_t i = 0; i < j.size(); ++i) j[i] = ja[i] + jb[i];
        r.add_term(j, ca * cb);
      }
    return r;
  }
  friend LaurentElement operator*(const PadicScalar& s, const LaurentElement& a) {
    LaurentElement r(a.p_, a.nvars_);
    if (s.is_zero()) return r;
    for (const auto& [j, c] : a.terms_) r.terms_.emplace(j, c * s);
    return r;
  }
  friend bool operator==(const LaurentElement& a, const LaurentElement& b) {
    return a.nvars_ == b.nvars_ && a.terms_ == b.terms_;
  }

  /// Formal partial derivative d/dt_i, 0-based axis.
  LaurentElement derive(std::size_t i) const {
    if (i >= nvars_) fail(ErrorKind::domain, "derivation axis out of range");
    LaurentElement r(p_, nvars_);
    for (const auto& [j, c] : terms_) {
      if (j[i] == 0) continue;
      Exponent k = j;
      k[i] -= 1;
      r.add_term(k, c * Rational(j[i]));
    }
    return r;
  }

  /// min_J (v(c_J) + <r, J>); +inf for zero.
  Valuation gauss_valuation(const WeightVector& r) const {
    check_weights(r.size());
    Valuation best;
    for (const auto& [j, c] : terms_) {
      Valuation v = c.valuation() + Valuation(pairing(r, j));
      if (v < best) best = v;
    }
    return best;
  }

  /// Behaviour of c -> v_{c r}(f) as c -> 0+: least coefficient valuation,
  /// then the least <r, J> among the terms attaining it. Nullopt for zero.
  template <class W>
  std::optional<Germ<W>> valuation_germ(const std::vector<W>& r) const {
    check_weights(r.size());
    std::optional<Germ<W>> best;
    for (const auto& [j, c] : terms_) {
      Germ<W> g(c.valuation().value(), pairing(r, j));
      if (!best || g < *best) best = g;
    }
    return best;
  }

  /// Exact lower envelope c -> v_{c r}(f) = min_J (v(c_J) + c <r, J>).
  PiecewiseAffine valuation_line(const WeightVector& r) const {
    if (is_zero()) fail(ErrorKind::domain, "valuation_line of zero");
    check_weights(r.size());
    std::vector<std::pair<Rational, Rational>> lines;
    for (const auto& [j, c] : terms_) lines.emplace_back(c.valuation().value(), pairing(r, j));
    return PiecewiseAffine::lower_envelope(lines);
  }

  /// Monomial change of coordinates: the term t^J becomes t^{A J}.
  /// A must be square of size nvars.
  LaurentElement monomial_substitute(const std::vector<std::vector<long>>& a) const {
    LaurentElement r(p_, a.size());
    for (const auto& [j, c] : terms_) {
      Exponent k(a.size(), 0);
      for (std::size_t row = 0; row < a.size(); ++row)
        for (std::size_t col = 0; col < nvars_; ++col) k[row] += a[row][col] * j[col];
      r.add_term(k, c);
    }
    return r;
  }

  /// Substitutes t_axis = z + t_axis' (z rational), expanding negative powers
  /// as power series in t_axis' truncated beyond degree `order`.
  LaurentElement translate(std::size_t axis, const Rational& z, long order) const {
    if (z == 0) return *this;
    LaurentElement r(p_, nvars_);
    for (const auto& [j, c] : terms_) {
      const long e = j[axis];
      // (z + x)^e = sum_m binom(e, m) z^(e-m) x^m, finite when e >= 0
      const long top = e >= 0 ? e : order;
      Rational binom = 1;
      for (long m = 0; m <= top; ++m) {
        if (m > 0) binom = binom * Rational(e - m + 1) / Rational(m);
        Exponent k = j;
        k[axis] = m;
        r.add_term(k, c * (binom * rational_power(z, e - m)));
      }
    }
    return r;
  }

  /// Substitutes t_axis = g (g must not involve negative powers of t_axis
  /// needing inversion): only terms with nonnegative exponent on `axis` allowed.
  LaurentElement substitute(std::size_t axis, const LaurentElement& g) const {
    check_same(g);
    LaurentElement r(p_, nvars_);
    for (const auto& [j, c] : terms_) {
      if (j[axis] < 0)
        fail(ErrorKind::unsupported, "substitution into a negative power needs a series expansion");
      Exponent k = j;
      k[axis] = 0;
      LaurentElement term = monomial(p_, k, c);
      for (long m = 0; m < j[axis]; ++m) term = term * g;
      r += term;
    }
    return r;
  }

  /// Grammar form: one "c * pi^m * x^a * ..." term per nonzero pi-power.
  std::string str(const std::vector<std::string>& names = {}) const {
    if (terms_.empty()) return "0/1";
    std::string out;
    for (const auto& [j, c] : terms_) {
      std::string vars;
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (j[i] == 0) continue;
        std::string name = i < names.size() ? names[i] : "t" + std::to_string(i + 1);
        vars += " * " + name + "^" + std::to_string(j[i]);
      }
      for (std::size_t m = 0; m < c.coeffs().size(); ++m) {
        if (c.coeffs()[m] == 0) continue;
        if (!out.empty()) out += " + ";
        out += to_string(c.coeffs()[m]);
        if (m > 0) out += " * pi^" + std::to_string(m);
        out += vars;
      }
    }
    return out;
  }

 private:
  static Rational rational_power(const Rational& z, long e) {
    Rational r = 1;
    Rational base = e >= 0 ? z : Rational(1) / z;
    for (long k = 0; k < (e >= 0 ? e : -e); ++k) r *= base;
    return r;
  }
  void check_same(const LaurentElement& g) const {
    if (g.nvars_ != nvars_ || g.p_ != p_)
      fail(ErrorKind::domain, "mixing Laurent elements of different shapes");
  }
  void check_weights(std::size_t n) const {
    if (n != nvars_) fail(ErrorKind::domain, "weight vector length does not match nvars");
  }

  long p_ = 2;
  std::size_t nvars_ = 0;
  Terms terms_;
};

}  // namespace swanlab
