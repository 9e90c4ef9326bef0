#pragma once

// Affine functionals, max-of-affine functions on the standard simplex, and
// exact convexity / integrality tests on grid samples.

#include <swanlab/rational.hpp>

#include <algorithm>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

namespace swanlab {

using Point = std::vector<Rational>;
using GridSamples = std::map<Point, Rational>;

struct AffineFunctional {
  std::vector<Rational> a;
  Rational b;

  Rational operator()(const Point& x) const {
    if (x.size() != a.size()) fail(ErrorKind::domain, "affine functional evaluated at a point of wrong dimension");
    Rational v = b;
    for (std::size_t i = 0; i < a.size(); ++i) v += a[i] * x[i];
    return v;
  }
  bool is_transintegral() const {
    return std::all_of(a.begin(), a.end(), [](const Rational& q) { return is_integer(q); });
  }
  bool is_integral() const { return is_transintegral() && is_integer(b); }

  /// "a_1,...,a_n;b"
  std::string str() const { return to_string(a) + ";" + to_string(b); }

  friend bool operator==(const AffineFunctional&, const AffineFunctional&) = default;
  friend auto operator<=>(const AffineFunctional& x, const AffineFunctional& y) {
    if (x.a != y.a) return x.a < y.a ? std::strong_ordering::less : std::strong_ordering::greater;
    if (x.b != y.b) return x.b < y.b ? std::strong_ordering::less : std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }
};

/// The simplex T = {r_i >= 0, sum r_i = 1} as constraints lambda >= 0.
inline std::vector<AffineFunctional> simplex_constraints(std::size_t n) {
  std::vector<AffineFunctional> cs;
  for (std::size_t i = 0; i < n; ++i) {
    AffineFunctional c{std::vector<Rational>(n, 0), 0};
    c.a[i] = 1;
    cs.push_back(c);
  }
  cs.push_back({std::vector<Rational>(n, 1), -1});
  cs.push_back({std::vector<Rational>(n, -1), 1});
  return cs;
}

/// Rewrites a functional on T in the form with least linear coefficient 0,
/// using sum r_i = 1.
inline AffineFunctional normalize_on_simplex(AffineFunctional f) {
  if (f.a.empty()) return f;
  Rational m = *std::min_element(f.a.begin(), f.a.end());
  for (auto& x : f.a) x -= m;
  f.b += m;
  return f;
}

class PolyhedralFunction {
 public:
  PolyhedralFunction(std::vector<AffineFunctional> pieces, std::vector<AffineFunctional> region)
      : pieces_(std::move(pieces)), region_(std::move(region)) {
    if (pieces_.empty()) fail(ErrorKind::domain, "polyhedral function with no pieces");
  }

  const std::vector<AffineFunctional>& pieces() const { return pieces_; }
  const std::vector<AffineFunctional>& region() const { return region_; }
  std::size_t dim() const { return pieces_.front().a.size(); }

  bool contains(const Point& x) const {
    return std::all_of(region_.begin(), region_.end(), [&](const AffineFunctional& c) { return c(x) >= 0; });
  }

  Rational operator()(const Point& x) const {
    if (!contains(x)) fail(ErrorKind::domain, "point outside the region of the polyhedral function");
    Rational best = pieces_.front()(x);
    for (const auto& p : pieces_) best = std::max(best, p(x));
    return best;
  }

  bool all_integral() const {
    return std::all_of(pieces_.begin(), pieces_.end(), [](const auto& p) { return p.is_integral(); });
  }
  bool all_transintegral() const {
    return std::all_of(pieces_.begin(), pieces_.end(), [](const auto& p) { return p.is_transintegral(); });
  }

  std::string str() const {
    std::string out = "pieces:";
    for (const auto& p : pieces_) out += " " + p.str();
    out += "\nregion:";
    for (const auto& c : region_) out += " " + c.str();
    return out;
  }

 private:
  std::vector<AffineFunctional> pieces_;
  std::vector<AffineFunctional> region_;
};

inline Rational eval(const PolyhedralFunction& f, const Point& x) { return f(x); }

/// Outcome of a grid test; `witness` describes the first failure.
struct Verdict {
  bool ok = true;
  std::string witness;
};

/// The grid T cap (1/N)Z^n, lexicographic by numerators.
inline std::vector<Point> simplex_grid(std::size_t n, long N) {
  if (n == 0 || N < 1) fail(ErrorKind::domain, "simplex_grid needs n >= 1 and N >= 1");
  std::vector<Point> out;
  std::vector<long> k(n, 0);
  auto rec = [&](auto&& self, std::size_t i, long left) -> void {
    if (i + 1 == n) {
      k[i] = left;
      Point x;
      for (long v : k) x.push_back(make_rational(v, N));
      for (auto& q : x) q.canonicalize();
      out.push_back(std::move(x));
      return;
    }
    for (long v = 0; v <= left; ++v) {
      k[i] = v;
      self(self, i + 1, left - v);
    }
  };
  rec(rec, 0, N);
  return out;
}

namespace detail {

inline std::string point_str(const Point& x) { return "(" + to_string(x) + ")"; }

inline Point midpoint(const Point& x, const Point& y) {
  Point m;
  for (std::size_t i = 0; i < x.size(); ++i) m.push_back((x[i] + y[i]) / 2);
  return m;
}

}  // namespace detail

/// Midpoint convexity over every pair of samples whose midpoint is sampled.
inline Verdict check_convex(const GridSamples& samples) {
  for (auto i = samples.begin(); i != samples.end(); ++i)
    for (auto j = std::next(i); j != samples.end(); ++j) {
      auto m = samples.find(detail::midpoint(i->first, j->first));
      if (m == samples.end()) continue;
      if (2 * m->second > i->second + j->second)
        return {false, "f" + detail::point_str(m->first) + " = " + to_string(m->second) + " exceeds the mean of f" +
                           detail::point_str(i->first) + " = " + to_string(i->second) + " and f" +
                           detail::point_str(j->first) + " = " + to_string(j->second)};
    }
  return {};
}

/// f(x) in Z + Z x_1 + ... + Z x_n at every sample.
inline Verdict check_integral_polyhedral(const GridSamples& samples) {
  for (const auto& [x, v] : samples)
    if (!in_lattice(v, x))
      return {false, "f" + detail::point_str(x) + " = " + to_string(v) + " is not in Z + sum Z x_i"};
  return {};
}

/// Recovers max-of-affine pieces from samples on T cap (1/N)Z^n by exact
/// interpolation on the cells of the Kuhn triangulation (last coordinate
/// eliminated). Throws unless the resulting envelope reproduces every sample.
inline PolyhedralFunction fit_polyhedral(const GridSamples& samples, long N) {
  if (samples.empty()) fail(ErrorKind::domain, "fit_polyhedral: no samples");
  const std::size_t n = samples.begin()->first.size();
  const std::size_t m = n - 1;
  auto value_at = [&](const std::vector<long>& k) -> std::optional<Rational> {
    long s = std::accumulate(k.begin(), k.end(), 0L);
    if (s > N) return std::nullopt;
    Point x;
    for (long v : k) x.push_back(make_rational(v, N));
    x.push_back(make_rational(N - s, N));
    for (auto& q : x) q.canonicalize();
    auto it = samples.find(x);
    if (it == samples.end()) return std::nullopt;
    return it->second;
  };

  std::vector<AffineFunctional> candidates;
  std::vector<std::size_t> perm(m);
  for (const auto& [x, v] : samples) {
    std::vector<long> base;
    for (std::size_t i = 0; i < m; ++i) {
      Rational t = x[i] * N;
      if (!is_integer(t)) fail(ErrorKind::domain, "fit_polyhedral: sample off the 1/N grid");
      base.push_back(t.get_num().get_si());
    }
    std::iota(perm.begin(), perm.end(), 0);
    do {
      AffineFunctional g{std::vector<Rational>(n, 0), 0};
      std::vector<long> k = base;
      Rational prev = v;
      bool complete = true;
      for (std::size_t step = 0; step < m; ++step) {
        k[perm[step]] += 1;
        auto next = value_at(k);
        if (!next) {
          complete = false;
          break;
        }
        g.a[perm[step]] = (*next - prev) * N;
        prev = *next;
      }
      if (!complete) continue;
      g.b = v;
      for (std::size_t i = 0; i < m; ++i) g.b -= g.a[i] * x[i];
      candidates.push_back(normalize_on_simplex(g));
    } while (std::next_permutation(perm.begin(), perm.end()));
  }
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

  std::vector<AffineFunctional> kept;
  for (const auto& g : candidates) {
    bool supporting = std::all_of(samples.begin(), samples.end(), [&](const auto& s) { return g(s.first) <= s.second; });
    if (supporting) kept.push_back(g);
  }
  if (kept.empty()) fail(ErrorKind::invariant, "fit_polyhedral: samples are not convex (no supporting piece)");
  PolyhedralFunction f(kept, simplex_constraints(n));
  for (const auto& [x, v] : samples)
    if (f(x) != v)
      fail(ErrorKind::invariant, "fit_polyhedral: no max-of-affine fit at resolution " + std::to_string(N) +
                                     "; mismatch at " + detail::point_str(x) + " (sample " + to_string(v) +
                                     ", fit " + to_string(f(x)) + ")");
  return f;
}

/// Where two adjacent pieces exchange leadership: <a - a', r> + (b - b') = 0
/// on T, with the grid points found on it.
struct BreakpointLocus {
  std::size_t first, second;
  AffineFunctional equation;
  std::vector<Point> grid_points;

  std::string str() const { return equation.str() + " = 0"; }
};

namespace detail {

// Affine rank of a set of points (dimension of their affine span).
inline std::size_t affine_rank(const std::vector<Point>& pts) {
  if (pts.size() < 2) return 0;
  std::vector<std::vector<Rational>> rows;
  for (std::size_t k = 1; k < pts.size(); ++k) {
    std::vector<Rational> r;
    for (std::size_t i = 0; i < pts[0].size(); ++i) r.push_back(pts[k][i] - pts[0][i]);
    rows.push_back(std::move(r));
  }
  std::size_t rank = 0;
  const std::size_t cols = pts[0].size();
  for (std::size_t c = 0; c < cols && rank < rows.size(); ++c) {
    std::size_t piv = rank;
    while (piv < rows.size() && rows[piv][c] == 0) ++piv;
    if (piv == rows.size()) continue;
    std::swap(rows[piv], rows[rank]);
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (r == rank || rows[r][c] == 0) continue;
      Rational f = rows[r][c] / rows[rank][c];
      for (std::size_t j = 0; j < cols; ++j) rows[r][j] -= f * rows[rank][j];
    }
    ++rank;
  }
  return rank;
}

}  // namespace detail

/// Loci between pieces that both attain the max on a face of codimension 1
/// in T (detected on the grid points).
inline std::vector<BreakpointLocus> breakpoint_loci(const PolyhedralFunction& f, const std::vector<Point>& grid) {
  std::vector<BreakpointLocus> out;
  const auto& ps = f.pieces();
  const std::size_t n = f.dim();
  for (std::size_t i = 0; i < ps.size(); ++i)
    for (std::size_t j = i + 1; j < ps.size(); ++j) {
      std::vector<Point> shared;
      for (const auto& x : grid) {
        Rational v = f(x);
        if (ps[i](x) == v && ps[j](x) == v) shared.push_back(x);
      }
      if (shared.empty() || detail::affine_rank(shared) + 2 < n) continue;
      AffineFunctional eq{std::vector<Rational>(n), ps[i].b - ps[j].b};
      for (std::size_t k = 0; k < n; ++k) eq.a[k] = ps[i].a[k] - ps[j].a[k];
      out.push_back({i, j, eq, shared});
    }
  return out;
}

}  // namespace swanlab
