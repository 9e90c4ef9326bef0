#pragma once

// Closed-form break of a rank-one Dwork module along a monomial valuation,
// computed from the support of f alone. Independent of the Newton-polygon
// engine; used to cross-check it.

#include <swanlab/germ.hpp>
#include <swanlab/laurent.hpp>

#include <optional>
#include <string>
#include <vector>

namespace swanlab {

namespace detail {

inline bool all_divisible(const Exponent& j, long p) {
  for (long e : j)
    if (e % p != 0) return false;
  return true;
}

inline bool is_zero_exponent(const Exponent& j) {
  for (long e : j)
    if (e != 0) return false;
  return true;
}

inline std::string exponent_str(const Exponent& j) {
  std::string s = "(";
  for (std::size_t i = 0; i < j.size(); ++i) s += (i ? "," : "") + std::to_string(j[i]);
  return s + ")";
}

/// Largest pole order -<r,J> over unit-coefficient monomials with some
/// exponent prime to p, clipped below at 0. Throws on coefficients of
/// negative valuation and on p-divisible monomials whose Artin-Schreier
/// reduction could reach or exceed that value.
template <class W>
W supported_pole_order(const LaurentElement& f, const std::vector<W>& r) {
  const long p = f.prime();
  const W zero = W(0);
  W best = zero;
  std::vector<Exponent> divisible;
  for (const auto& [j, c] : f.terms()) {
    const Rational v = c.valuation().value();
    if (v < 0)
      fail(ErrorKind::unsupported, "coefficient of negative valuation at " + exponent_str(j) +
                                       ": module is not solvable at the boundary");
    if (v > 0 || is_zero_exponent(j)) continue;
    if (all_divisible(j, p)) {
      divisible.push_back(j);
      continue;
    }
    W order = W(-pairing(r, j));
    if (order > best) best = order;
  }
  for (Exponent j : divisible) {
    while (all_divisible(j, p) && !is_zero_exponent(j))
      for (auto& e : j) e /= p;
    W reduced = W(-pairing(r, j));
    if (reduced > zero && reduced >= best)
      fail(ErrorKind::unsupported, "p-divisible monomial: Artin-Schreier reduction required, out of scope");
  }
  return best;
}

}  // namespace detail

/// Throws unless the naive connection d + pi df computes the true break at r.
template <class W>
void check_dwork_support(const LaurentElement& f, const std::vector<W>& r) {
  (void)detail::supported_pole_order(f, r);
}

/// max(0, max_J -<r, J>) over unit-coefficient monomials of f: the break of
/// Dwork(f) along the Gauss weight r (unnormalized, small-radius limit).
template <class W>
W rank1_oracle_break(const LaurentElement& f, const std::vector<W>& r) {
  for (const auto& x : r)
    if (x < W(0)) fail(ErrorKind::domain, "rank1_oracle_break: negative weight");
  return detail::supported_pole_order(f, r);
}

}  // namespace swanlab
