#pragma once

// Variation of breaks along a boundary divisor of a smooth toric surface
// (P^2 or P^1 x P^1) for direct sums of Dwork isocrystals.

#include <swanlab/break_variation.hpp>

#include <algorithm>
#include <array>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace swanlab {

using Ray = std::array<long, 2>;

/// A smooth complete toric surface given by its rays in cyclic order. Each
/// ray is a boundary divisor D_i, a smooth rational curve.
struct Ambient {
  std::string name;
  std::vector<Ray> rays;
  std::vector<std::string> ray_names;

  std::size_t size() const { return rays.size(); }
  std::size_t prev(std::size_t i) const { return (i + size() - 1) % size(); }
  std::size_t next(std::size_t i) const { return (i + 1) % size(); }
  bool adjacent(std::size_t i, std::size_t j) const { return i != j && (next(i) == j || prev(i) == j); }

  /// D_i . D_j: 1 for neighbours, -a_i on the diagonal where
  /// rho_{i-1} + rho_{i+1} = a_i rho_i.
  long intersection(std::size_t i, std::size_t j) const {
    if (i == j) {
      const Ray& a = rays[prev(i)];
      const Ray& b = rays[next(i)];
      const Ray& r = rays[i];
      long sx = a[0] + b[0], sy = a[1] + b[1];
      long k = r[0] != 0 ? sx / r[0] : sy / r[1];
      if (sx != k * r[0] || sy != k * r[1]) fail(ErrorKind::invariant, "ambient fan is not smooth");
      return -k;
    }
    return adjacent(i, j) ? 1 : 0;
  }
  long genus(std::size_t) const { return 0; }
  /// Coefficients of K = -sum D_i.
  std::vector<long> canonical() const { return std::vector<long>(size(), -1); }

  std::size_t find(const std::string& n) const {
    for (std::size_t i = 0; i < size(); ++i)
      if (ray_names[i] == n) return i;
    fail(ErrorKind::usage, "no boundary divisor named '" + n + "' on " + name);
  }
};

/// Exponents (a, b) of x^a t^b pair with rays as <(a, b), rho>.
inline Ambient p1xp1() {
  return {"P1xP1", {{1, 0}, {0, 1}, {-1, 0}, {0, -1}}, {"x:0", "t:0", "x:inf", "t:inf"}};
}
inline Ambient p2() { return {"P2", {{1, 0}, {0, 1}, {-1, -1}}, {"x:0", "t:0", "line:inf"}}; }

inline Ambient ambient_by_name(const std::string& n) {
  if (n == "P1xP1") return p1xp1();
  if (n == "P2") return p2();
  fail(ErrorKind::usage, "unknown ambient '" + n + "' (expected P1xP1 or P2)");
}

/// Divisor classes as coefficient vectors on the D_i.
inline Rational intersect(const Ambient& a, const std::vector<Rational>& d1, const std::vector<Rational>& d2) {
  Rational s = 0;
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a.size(); ++j) s += d1[i] * d2[j] * Rational(a.intersection(i, j));
  return s;
}

inline NablaModule dwork_or_trivial(const LaurentElement& f) {
  return f.is_zero() ? make_trivial(f.prime(), f.nvars()) : make_dwork(f);
}

/// A direct sum of Dwork isocrystals on the torus of a toric surface, with
/// a chosen boundary divisor Z (by ray index). Leaves are in (x, t).
struct SurfaceModel {
  Ambient ambient;
  std::size_t z_ray = 1;
  std::vector<LaurentElement> leaves;
  std::string label;

  long prime() const { return leaves.front().prime(); }
  std::size_t rank() const { return leaves.size(); }
};

inline SurfaceModel make_surface_model(const Ambient& amb, std::size_t z_ray, const NablaModule& m,
                                       std::string label = "") {
  if (m.nvars() != 2) fail(ErrorKind::usage, "surface models need exactly two variables");
  if (z_ray >= amb.size()) fail(ErrorKind::usage, "divisor index out of range");
  auto leaves = dwork_leaves(m);
  if (!leaves)
    fail(ErrorKind::unsupported, "surface analysis needs a direct sum of Dwork leaves (explicit blocks present)");
  return {amb, z_ray, *leaves, std::move(label)};
}

/// A point of Z: the fixed point meeting the previous or next boundary
/// divisor, or u = z (z in 1..p-1) in the chart of the previous divisor.
struct ZPoint {
  enum class Kind { fixed_prev, interior, fixed_next };
  Kind kind = Kind::interior;
  long z = 0;

  std::string str(const Ambient& a, std::size_t z_ray) const {
    switch (kind) {
      case Kind::fixed_prev: return "meet " + a.ray_names[a.prev(z_ray)];
      case Kind::fixed_next: return "meet " + a.ray_names[a.next(z_ray)];
      case Kind::interior: return "u=" + std::to_string(z);
    }
    return "";
  }
  friend bool operator==(const ZPoint&, const ZPoint&) = default;
};

namespace detail {

inline std::vector<std::vector<long>> chart_matrix(const Ray& nb, const Ray& z) {
  return {{nb[0], nb[1]}, {z[0], z[1]}};
}

inline std::vector<std::vector<long>> inverse_unimodular(const std::vector<std::vector<long>>& m) {
  long det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
  if (det != 1 && det != -1) fail(ErrorKind::invariant, "chart is not unimodular");
  return {{m[1][1] * det, -m[0][1] * det}, {-m[1][0] * det, m[0][0] * det}};
}

inline long series_order(long p) { return p * p + p; }

}  // namespace detail

/// Leaf f in local coordinates (u, v) at a point of Z: v cuts out Z and u
/// is the transverse coordinate (translated so the point is u = 0).
inline LaurentElement local_leaf(const SurfaceModel& m, const LaurentElement& f, const ZPoint& pt) {
  const auto& a = m.ambient;
  const std::size_t nb = pt.kind == ZPoint::Kind::fixed_next ? a.next(m.z_ray) : a.prev(m.z_ray);
  auto mat = detail::chart_matrix(a.rays[nb], a.rays[m.z_ray]);
  LaurentElement g = f.monomial_substitute(mat);
  if (!(g.monomial_substitute(detail::inverse_unimodular(mat)) == f))
    fail(ErrorKind::invariant, "chart substitution does not invert on overlaps");
  if (pt.kind == ZPoint::Kind::interior) g = g.translate(0, Rational(pt.z), detail::series_order(m.prime()));
  return g;
}

inline PreparedModule local_module(const SurfaceModel& m, const ZPoint& pt,
                                   const std::optional<std::pair<Rational, LaurentElement>>& reparam = std::nullopt) {
  std::vector<NablaModule> parts;
  for (const auto& f : m.leaves) {
    LaurentElement g = local_leaf(m, f, pt);
    if (reparam) {
      LaurentElement u = LaurentElement::monomial(g.prime(), {1, 0}, reparam->first) + reparam->second;
      g = g.substitute(0, u);
    }
    parts.push_back(dwork_or_trivial(g));
  }
  return PreparedModule(parts.size() == 1 ? parts.front() : direct_sum(parts));
}

/// Local breaks b_i(r) = b_i(0) + b_i' r at weights (r, 1), r near 0,
/// normalized by the local parameter of Z.
struct PointReport {
  ZPoint point;
  std::string label;
  std::vector<AffineRho> breaks;  // decreasing for small r > 0
  AffineRho swan;
  bool crossing = false;   // lies on another boundary component
  bool special = false;    // in the enumerated special locus
  bool exposed = false;    // strict monotonicity at a smooth point
  std::vector<std::pair<std::size_t, Rational>> monotonicity;  // (i, b'_1+...+b'_i + l_i)

  Rational swan_slope() const { return swan.rho; }
};

inline PointReport point_breaks(const SurfaceModel& m, const ZPoint& pt,
                                const std::optional<std::pair<Rational, LaurentElement>>& reparam = std::nullopt) {
  PreparedModule lm = local_module(m, pt, reparam);
  const std::vector<AffineRho> w = {AffineRho(0, 1), AffineRho(1, 0)};
  auto g = lm.break_germs(w);
  if (g.masked > 0) fail(ErrorKind::unsupported, "masked breaks at " + pt.str(m.ambient, m.z_ray));
  PointReport rep;
  rep.point = pt;
  rep.label = pt.str(m.ambient, m.z_ray);
  rep.breaks = g.slopes;
  for (const auto& b : rep.breaks) rep.swan += b;
  return rep;
}

/// Boundary divisors carrying a pole of some leaf, plus Z itself.
inline std::vector<bool> boundary_components(const SurfaceModel& m) {
  std::vector<bool> in(m.ambient.size(), false);
  in[m.z_ray] = true;
  for (const auto& f : m.leaves)
    for (const auto& [j, c] : f.terms()) {
      if (c.valuation().value() > 0) continue;
      for (std::size_t i = 0; i < m.ambient.size(); ++i)
        if (j[0] * m.ambient.rays[i][0] + j[1] * m.ambient.rays[i][1] < 0) in[i] = true;
    }
  return in;
}

namespace detail {

inline long mod(long a, long p) { return ((a % p) + p) % p; }

inline long reduce_mod(const Rational& q, long p) {
  long den = mpz_fdiv_ui(q.get_den_mpz_t(), static_cast<unsigned long>(p));
  long num = mpz_fdiv_ui(q.get_num_mpz_t(), static_cast<unsigned long>(p));
  long inv = 1;
  for (long e = p - 2, b = den; e > 0; e >>= 1, b = b * b % p)
    if (e & 1) inv = inv * b % p;
  return num * inv % p;
}

// Number of roots in F_p^x counted with multiplicity; coefficients low first.
inline long nonzero_roots_with_multiplicity(std::vector<long> poly, long p, std::set<long>& roots) {
  long count = 0;
  while (!poly.empty() && poly.back() == 0) poly.pop_back();
  for (long a = 1; a < p; ++a) {
    for (;;) {
      if (poly.size() < 2) break;
      std::vector<long> q(poly.size() - 1);
      long carry = 0;
      for (std::size_t k = poly.size(); k-- > 0;) {
        long coeff = mod(poly[k] + carry, p);
        if (k == 0) {
          carry = coeff;
          break;
        }
        q[k - 1] = coeff;
        carry = coeff * a % p;
      }
      if (carry != 0) break;
      poly = q;
      ++count;
      roots.insert(a);
    }
  }
  return count;
}

}  // namespace detail

/// Special points of Z in the interior of the chart u: roots of the rows
/// (coefficients of fixed powers of v, reduced mod p) and their derivatives.
/// Throws when a row does not split over F_p.
inline std::set<long> special_interior_points(const SurfaceModel& m) {
  const long p = m.prime();
  std::set<long> roots;
  for (const auto& f : m.leaves) {
    LaurentElement g = local_leaf(m, f, {ZPoint::Kind::fixed_prev, 0});
    std::map<long, std::map<long, long>> rows;  // v-exponent -> u-exponent -> coeff mod p
    for (const auto& [j, c] : g.terms()) {
      if (c.valuation().value() > 0) continue;
      long r = detail::reduce_mod(c.coeffs()[0], p);
      if (r) rows[j[1]][j[0]] = r;
    }
    for (const auto& [vexp, row] : rows) {
      if (vexp >= 0) continue;
      for (int deriv = 0; deriv < 2; ++deriv) {
        std::map<long, long> poly_map;
        for (const auto& [e, c] : row) {
          long coeff = deriv ? detail::mod(c * e, p) : c;
          long exp = deriv ? e - 1 : e;
          if (coeff) poly_map[exp] = coeff;
        }
        if (poly_map.empty()) continue;
        const long lo = poly_map.begin()->first;
        std::vector<long> poly(static_cast<std::size_t>(poly_map.rbegin()->first - lo + 1), 0);
        for (const auto& [e, c] : poly_map) poly[static_cast<std::size_t>(e - lo)] = c;
        const long degree = static_cast<long>(poly.size()) - 1;
        if (detail::nonzero_roots_with_multiplicity(poly, p, roots) != degree)
          fail(ErrorKind::unsupported, "unenumerable special locus: a row polynomial on " +
                                           m.ambient.ray_names[m.z_ray] + " in the chart of " +
                                           m.ambient.ray_names[m.ambient.prev(m.z_ray)] +
                                           " does not split over F_" + std::to_string(p));
      }
    }
  }
  return roots;
}

struct EllReport {
  long ell = 0;
  std::vector<Rational> generic_breaks;                 // b_i(E, Z), decreasing
  std::vector<std::pair<std::size_t, long>> ell_i;      // jump index i (1-based) -> l_i
  ZPoint generic_point;

  bool is_jump(std::size_t i) const {
    for (const auto& [k, _] : ell_i)
      if (k == i) return true;
    return false;
  }
  long ell_at(std::size_t i) const {
    for (const auto& [k, v] : ell_i)
      if (k == i) return v;
    fail(ErrorKind::domain, "l_i requested at a non-jump index");
  }
};

/// The first interior point of Z outside the special locus.
inline ZPoint generic_point(const SurfaceModel& m) {
  auto special = special_interior_points(m);
  for (long z = 1; z < m.prime(); ++z)
    if (!special.count(z)) return {ZPoint::Kind::interior, z};
  fail(ErrorKind::unsupported, "every point of F_" + std::to_string(m.prime()) +
                                   "^x on the divisor is special; use a larger prime");
}

/// Ranks of break components on which d/dv is not dominant at the generic
/// point (ties count d/dv as dominant).
inline EllReport ell_invariant(const SurfaceModel& m) {
  EllReport out;
  out.generic_point = generic_point(m);
  PreparedModule lm = local_module(m, out.generic_point);
  auto g = lm.break_germs(WeightVector{Rational(0), Rational(1)});
  if (g.masked > 0) fail(ErrorKind::unsupported, "masked breaks at the generic point");
  out.generic_breaks = g.slopes;
  long acc = 0;
  const std::size_t d = g.slopes.size();
  for (std::size_t i = 1; i <= d; ++i) {
    const auto& axes = g.dominant[i - 1];
    if (std::find(axes.begin(), axes.end(), std::size_t(1)) == axes.end()) ++acc;
    if (i == d || g.slopes[i - 1] > g.slopes[i]) out.ell_i.emplace_back(i, acc);
  }
  out.ell = acc;
  return out;
}

/// b'_1 + ... + b'_i + l_i at each jump index; fills `exposed`.
inline void monotonicity_check(PointReport& rep, const EllReport& ell) {
  rep.monotonicity.clear();
  rep.exposed = false;
  Rational acc = 0;
  for (std::size_t i = 1; i <= rep.breaks.size(); ++i) {
    acc += rep.breaks[i - 1].rho;
    if (!ell.is_jump(i)) continue;
    Rational v = acc + Rational(ell.ell_at(i));
    rep.monotonicity.emplace_back(i, v);
    if (v < 0 && !rep.crossing) rep.exposed = true;
  }
}

inline bool monotonicity_holds(const PointReport& rep) {
  for (const auto& [i, v] : rep.monotonicity)
    if (v > 0) return false;
  return true;
}

/// All points of Z over F_p: both fixed points and u = 1..p-1.
struct SurfaceReport {
  EllReport ell;
  Rational swan_z = 0;  // Swan(E, Z)
  std::vector<PointReport> points;
  Rational lhs = 0, rhs = 0;
  bool generic_law = true;   // Swan' = -l at every non-special point
  bool monotone = true;      // inequality at every smooth point
  bool generic_equality = true;  // equality at every non-special point
  std::size_t exposed = 0;

  bool subharmonic() const { return lhs >= rhs; }
  bool equality() const { return lhs == rhs; }
};

inline SurfaceReport analyze_surface(const SurfaceModel& m) {
  SurfaceReport out;
  out.ell = ell_invariant(m);
  for (const auto& b : out.ell.generic_breaks) out.swan_z += b;
  const auto special = special_interior_points(m);
  const auto bnd = boundary_components(m);
  const auto& a = m.ambient;

  std::vector<ZPoint> pts = {{ZPoint::Kind::fixed_prev, 0}};
  for (long z = 1; z < m.prime(); ++z) pts.push_back({ZPoint::Kind::interior, z});
  pts.push_back({ZPoint::Kind::fixed_next, 0});
  for (const auto& pt : pts) {
    PointReport rep = point_breaks(m, pt);
    rep.crossing = (pt.kind == ZPoint::Kind::fixed_prev && bnd[a.prev(m.z_ray)]) ||
                   (pt.kind == ZPoint::Kind::fixed_next && bnd[a.next(m.z_ray)]);
    rep.special = pt.kind != ZPoint::Kind::interior || special.count(pt.z) > 0;
    monotonicity_check(rep, out.ell);
    if (!rep.crossing && !monotonicity_holds(rep)) out.monotone = false;
    if (rep.exposed) ++out.exposed;
    if (!rep.special)
      for (const auto& [i, v] : rep.monotonicity)
        if (v != 0) out.generic_equality = false;
    if (!rep.special && rep.swan_slope() != Rational(-out.ell.ell)) out.generic_law = false;
    out.lhs += rep.swan_slope() + Rational(out.ell.ell);
    out.points.push_back(std::move(rep));
  }
  const long z2 = a.intersection(m.z_ray, m.z_ray);
  out.rhs = Rational(2 - 2 * a.genus(m.z_ray)) * Rational(out.ell.ell) - Rational(z2) * out.swan_z;
  return out;
}

/// f_i(s) = B_i(E, (1-s, s)) at the crossing of two adjacent boundary
/// divisors, in local parameters (t_1, t_2).
struct TurningScan {
  std::size_t first_ray = 0, second_ray = 0;
  long N = 0;
  std::vector<std::vector<Rational>> f;  // f[i-1][k] = f_i(k / N)
  std::vector<Rational> right_slope_at_0;
  std::vector<Rational> left_slope_at_1;
  std::vector<bool> affine;
  std::vector<bool> slope_test;          // f_i'(0) <= f_i(1) - f_i(0)
  std::vector<bool> convex;

  bool hidden() const {
    for (bool x : affine)
      if (!x) return true;
    return false;
  }
  bool slope_test_ok() const {
    for (bool x : slope_test)
      if (!x) return false;
    return true;
  }
};

inline TurningScan hidden_turning_scan(const SurfaceModel& m, std::size_t ray1, std::size_t ray2, long N = 12) {
  const auto& a = m.ambient;
  if (!a.adjacent(ray1, ray2)) fail(ErrorKind::usage, "turning scan needs two crossing boundary divisors");
  if (N < 2) fail(ErrorKind::domain, "turning scan needs N >= 2");
  auto mat = detail::chart_matrix(a.rays[ray1], a.rays[ray2]);
  std::vector<NablaModule> parts;
  for (const auto& f : m.leaves) parts.push_back(dwork_or_trivial(f.monomial_substitute(mat)));
  PreparedModule lm(parts.size() == 1 ? parts.front() : direct_sum(parts));
  const std::size_t d = m.rank();

  auto partial = [&](const auto& slopes, std::size_t i) {
    using W = std::decay_t<decltype(slopes[0])>;
    W s = W(0);
    for (std::size_t k = 0; k < i; ++k) s = s + slopes[k];
    return s;
  };
  TurningScan out;
  out.first_ray = ray1;
  out.second_ray = ray2;
  out.N = N;
  out.f.assign(d, std::vector<Rational>(static_cast<std::size_t>(N) + 1));
  // weights on (t1, t2) sum to 1, so slopes are already normalized
  auto g0 = lm.break_germs(std::vector<AffineRho>{AffineRho(1, -1), AffineRho(0, 1)});
  auto g1 = lm.break_germs(std::vector<AffineRho>{AffineRho(0, 1), AffineRho(1, -1)});
  if (g0.masked || g1.masked) fail(ErrorKind::unsupported, "masked breaks at the crossing");
  for (std::size_t i = 1; i <= d; ++i) {
    AffineRho at0 = partial(g0.slopes, i), at1 = partial(g1.slopes, i);
    out.f[i - 1][0] = at0.constant;
    out.f[i - 1][static_cast<std::size_t>(N)] = at1.constant;
    out.right_slope_at_0.push_back(at0.rho);
    out.left_slope_at_1.push_back(-at1.rho);
  }
  for (long k = 1; k < N; ++k) {
    auto bd = break_multiset(lm, WeightVector{make_rational(N - k, N), make_rational(k, N)});
    for (std::size_t i = 1; i <= d; ++i) out.f[i - 1][static_cast<std::size_t>(k)] = bd.partial_sum(i);
  }
  for (std::size_t i = 0; i < d; ++i) {
    const auto& fi = out.f[i];
    const Rational f0 = fi.front(), f1 = fi.back();
    bool aff = out.right_slope_at_0[i] == f1 - f0 && out.left_slope_at_1[i] == f1 - f0;
    bool conv = true;
    for (long k = 0; k <= N; ++k) {
      if (fi[static_cast<std::size_t>(k)] != f0 + (f1 - f0) * make_rational(k, N)) aff = false;
      if (k > 0 && k < N && 2 * fi[static_cast<std::size_t>(k)] > fi[static_cast<std::size_t>(k - 1)] + fi[static_cast<std::size_t>(k + 1)])
        conv = false;
    }
    out.affine.push_back(aff);
    out.convex.push_back(conv);
    out.slope_test.push_back(out.right_slope_at_0[i] <= f1 - f0);
  }
  return out;
}

/// Z . (Swan(E) + l(E, Z)(K + D)) for each boundary component Z of D,
/// compared with the point-by-point bookkeeping
///   (2g(Z) - 2) l + Z^2 Swan(E, Z) + sum_z (Swan'_Z(z) + l).
struct SwanDivisorComponent {
  std::size_t ray = 0;
  Rational swan = 0;
  long ell = 0;
  Rational intersection = 0;  // the left side
  Rational bookkeeping = 0;   // the right side
  bool turning_points = false;
  bool nonnegative() const { return intersection >= 0; }
  bool lemma_holds() const { return intersection >= bookkeeping && (turning_points || intersection == bookkeeping); }
};

struct SwanDivisorReport {
  std::vector<bool> in_d;
  std::vector<Rational> swan_divisor;  // coefficient on each D_i
  std::vector<SwanDivisorComponent> components;

  bool passes() const {
    for (const auto& c : components)
      if (!c.nonnegative() || !c.lemma_holds()) return false;
    return true;
  }
};

inline SwanDivisorReport swan_divisor_check(const SurfaceModel& m, long N = 12) {
  const auto& a = m.ambient;
  SwanDivisorReport out;
  out.in_d = boundary_components(m);
  out.swan_divisor.assign(a.size(), Rational(0));
  std::vector<SurfaceReport> reports(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!out.in_d[i]) continue;
    SurfaceModel mi = m;
    mi.z_ray = i;
    reports[i] = analyze_surface(mi);
    out.swan_divisor[i] = reports[i].swan_z;
  }
  std::vector<Rational> kd(a.size());
  const auto k = a.canonical();
  for (std::size_t i = 0; i < a.size(); ++i) kd[i] = Rational(k[i] + (out.in_d[i] ? 1 : 0));
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!out.in_d[i]) continue;
    const auto& rep = reports[i];
    SwanDivisorComponent c;
    c.ray = i;
    c.swan = rep.swan_z;
    c.ell = rep.ell.ell;
    std::vector<Rational> zi(a.size(), Rational(0));
    zi[i] = 1;
    std::vector<Rational> cls(a.size());
    for (std::size_t j = 0; j < a.size(); ++j) cls[j] = out.swan_divisor[j] + Rational(c.ell) * kd[j];
    c.intersection = intersect(a, zi, cls);
    c.bookkeeping = Rational(2 * a.genus(i) - 2) * Rational(c.ell) + Rational(a.intersection(i, i)) * c.swan + rep.lhs;
    c.turning_points = rep.exposed > 0;
    for (std::size_t j : {a.prev(i), a.next(i)}) {
      if (!out.in_d[j]) continue;
      SurfaceModel mi = m;
      if (hidden_turning_scan(mi, i, j, N).hidden()) c.turning_points = true;
    }
    out.components.push_back(c);
  }
  return out;
}

}  // namespace swanlab
