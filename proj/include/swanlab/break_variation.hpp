#pragma once

// Break multisets at Gauss weights and their variation over the simplex.

#include <swanlab/nabla_module.hpp>
#include <swanlab/polyhedral.hpp>

#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

namespace swanlab {

/// What the raw (c -> 0+) slopes are divided by.
struct Normalization {
  enum class Kind { sum, natural, by_variable };
  Kind kind = Kind::sum;
  std::size_t variable = 0;

  static Normalization sum() { return {}; }
  static Normalization natural() { return {Kind::natural, 0}; }
  static Normalization by_variable(std::size_t i) { return {Kind::by_variable, i}; }

  std::string str(const std::vector<std::string>& names = {}) const {
    switch (kind) {
      case Kind::sum: return "sum";
      case Kind::natural: return "natural";
      case Kind::by_variable: return variable < names.size() ? names[variable] : "t" + std::to_string(variable + 1);
    }
    return "";
  }
};

/// The divisor for a normalization at weight r: sum r_i, the positive
/// generator of Z r_1 + ... + Z r_n, or r_var.
inline Rational normalizer(const WeightVector& r, const Normalization& norm) {
  Rational d = 0;
  switch (norm.kind) {
    case Normalization::Kind::sum:
      for (const auto& x : r) d += x;
      break;
    case Normalization::Kind::natural: {
      Integer l = lcm_of_denominators(r), g = 0;
      for (const auto& x : r) {
        Rational s = x * Rational(l);
        s.canonicalize();
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), s.get_num_mpz_t());
      }
      d = Rational(g, l);
      d.canonicalize();
      break;
    }
    case Normalization::Kind::by_variable:
      if (norm.variable >= r.size()) fail(ErrorKind::usage, "normalization variable out of range");
      d = r[norm.variable];
      break;
  }
  if (d <= 0) fail(ErrorKind::domain, "normalizing parameter has nonpositive valuation at this weight");
  return d;
}

struct BreakData {
  WeightVector r;
  Normalization normalization;
  Rational divisor = 1;                          // the normalizer at r
  std::vector<Rational> breaks;                  // decreasing
  std::vector<std::vector<std::size_t>> dominant;  // axes attaining each break
  Rational swan = 0;

  std::size_t rank() const { return breaks.size(); }
  /// b_1 + ... + b_i, 1-based.
  Rational partial_sum(std::size_t i) const {
    Rational s = 0;
    for (std::size_t k = 0; k < i && k < breaks.size(); ++k) s += breaks[k];
    return s;
  }
};

inline void check_weight(const WeightVector& r) {
  bool positive = false;
  for (const auto& x : r) {
    if (x < 0) fail(ErrorKind::domain, "negative weight " + to_string(x));
    if (x > 0) positive = true;
  }
  if (!positive) fail(ErrorKind::domain, "weight vector is zero");
}

inline BreakData break_multiset(const PreparedModule& m, const WeightVector& r,
                                const Normalization& norm = Normalization::sum()) {
  check_weight(r);
  auto g = m.break_germs(r);
  if (g.masked > 0)
    fail(ErrorKind::unsupported, std::to_string(g.masked) + " break(s) masked below " + to_string(g.floor) +
                                     ": not readable from a single polygon");
  BreakData out;
  out.r = r;
  out.normalization = norm;
  out.divisor = normalizer(r, norm);
  for (std::size_t k = 0; k < g.slopes.size(); ++k) {
    out.breaks.push_back(g.slopes[k] / out.divisor);
    out.swan += out.breaks.back();
  }
  out.dominant = std::move(g.dominant);
  return out;
}

inline BreakData break_multiset(const NablaModule& m, const WeightVector& r,
                                const Normalization& norm = Normalization::sum()) {
  return break_multiset(PreparedModule(m), r, norm);
}

/// Worker count: SWANLAB_THREADS if set, else the hardware concurrency.
inline std::size_t configured_threads() {
  if (const char* env = std::getenv("SWANLAB_THREADS")) {
    long v = std::atol(env);
    if (v >= 1) return static_cast<std::size_t>(v);
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw ? hw : 1;
}

/// Runs job(i) for i in [0, count) on up to `threads` workers. The first
/// exception by index is rethrown after all workers finish.
template <class Job>
void parallel_for(std::size_t count, std::size_t threads, Job&& job) {
  std::vector<std::exception_ptr> errors(count);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next++) < count;) {
      try {
        job(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  threads = std::max<std::size_t>(1, std::min(threads, count));
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

/// One sampled function on the grid with its tests and fit.
struct SurfaceFunction {
  std::string name;
  GridSamples samples;
  Verdict convex;
  Verdict integral;
  std::optional<PolyhedralFunction> fit;
  std::string fit_error;
  std::vector<BreakpointLocus> loci;

  bool passes() const { return convex.ok && integral.ok && fit.has_value(); }
};

struct ExcludedPoint {
  Point r;
  std::string reason;
};

struct BreakSurface {
  std::size_t n = 0;
  std::size_t rank = 0;
  long N = 0;
  std::vector<std::pair<Point, BreakData>> table;  // grid order
  std::vector<ExcludedPoint> excluded;             // boundary points left out
  std::vector<SurfaceFunction> functions;          // d!*B_1 .. d!*B_d, then B_d

  bool passes() const {
    for (const auto& f : functions)
      if (!f.passes()) return false;
    return true;
  }
};

inline SurfaceFunction analyze_samples(std::string name, GridSamples samples, long N,
                                       const std::vector<Point>& grid) {
  SurfaceFunction f;
  f.name = std::move(name);
  f.samples = std::move(samples);
  f.convex = check_convex(f.samples);
  f.integral = check_integral_polyhedral(f.samples);
  try {
    f.fit = fit_polyhedral(f.samples, N);
    std::vector<Point> used;
    for (const auto& x : grid)
      if (f.samples.count(x)) used.push_back(x);
    f.loci = breakpoint_loci(*f.fit, used);
  } catch (const Error& e) {
    f.fit_error = e.what();
  }
  return f;
}

/// Breaks at every point of T cap (1/N)Z^n, normalized by sum r_i = 1.
/// Boundary points where a leaf loses support are excluded and reported;
/// failures in the interior abort with the offending r.
inline BreakSurface sweep_simplex(const PreparedModule& m, long N, std::size_t threads = configured_threads()) {
  if (N < 2) fail(ErrorKind::domain, "sweep_simplex needs N >= 2");
  const auto grid = simplex_grid(m.nvars(), N);
  std::vector<std::optional<BreakData>> results(grid.size());
  std::vector<std::string> reasons(grid.size());
  parallel_for(grid.size(), threads, [&](std::size_t k) {
    const Point& r = grid[k];
    const bool boundary = std::any_of(r.begin(), r.end(), [](const Rational& x) { return x == 0; });
    try {
      results[k] = break_multiset(m, r);
    } catch (const Error& e) {
      if (!boundary || e.kind() != ErrorKind::unsupported)
        throw Error(e.kind(), "at r = (" + to_string(r) + "): " + e.what());
      reasons[k] = e.what();
    }
  });

  BreakSurface s;
  s.n = m.nvars();
  s.rank = m.rank();
  s.N = N;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    if (results[k])
      s.table.emplace_back(grid[k], std::move(*results[k]));
    else
      s.excluded.push_back({grid[k], reasons[k]});
  }
  const std::size_t d = s.rank;
  const Rational dfact = factorial(static_cast<long>(d));
  for (std::size_t i = 1; i <= d; ++i) {
    GridSamples samples;
    for (const auto& [r, bd] : s.table) samples[r] = dfact * bd.partial_sum(i);
    s.functions.push_back(analyze_samples(std::to_string(d) + "!*B_" + std::to_string(i), std::move(samples), N, grid));
  }
  GridSamples top;
  for (const auto& [r, bd] : s.table) top[r] = bd.partial_sum(d);
  s.functions.push_back(analyze_samples("B_" + std::to_string(d), std::move(top), N, grid));
  return s;
}

inline BreakSurface sweep_simplex(const NablaModule& m, long N, std::size_t threads = configured_threads()) {
  return sweep_simplex(PreparedModule(m), N, threads);
}

/// CSV with columns r_1..r_n, b_1..b_d, swan.
inline std::string to_csv(const BreakSurface& s) {
  std::string out;
  for (std::size_t i = 1; i <= s.n; ++i) out += "r_" + std::to_string(i) + ",";
  for (std::size_t i = 1; i <= s.rank; ++i) out += "b_" + std::to_string(i) + ",";
  out += "swan\n";
  for (const auto& [r, bd] : s.table) {
    out += to_string(r) + ",";
    for (const auto& b : bd.breaks) out += to_string(b) + ",";
    out += to_string(bd.swan) + "\n";
  }
  return out;
}

}  // namespace swanlab
