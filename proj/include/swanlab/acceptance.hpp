#pragma once

// The acceptance suite: one deterministic line per criterion.

#include <swanlab/break_variation.hpp>
#include <swanlab/rank1_oracle.hpp>
#include <swanlab/serialize.hpp>
#include <swanlab/surface_variation.hpp>
#include <swanlab/zoo.hpp>

#include <algorithm>
#include <cstdint>
#include <functional>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace swanlab {

struct CriterionResult {
  int id = 0;
  std::string title;
  bool pass = false;
  std::string detail;

  std::string line() const {
    return std::string(pass ? "[PASS] " : "[FAIL] ") + std::to_string(id) + " " + title + ": " + detail;
  }
};

namespace acceptance {

// Pinned parameters.
inline constexpr long kGrid = 12;
inline constexpr int kOracleSamples = 20;
inline constexpr std::uint64_t kSeed = 20240611;
inline constexpr long kSpectralNmax = 8;
inline const Rational kSpectralC = make_rational(1, 4);
inline const Rational kSmallC = make_rational(1, 64);
inline constexpr int kLawCases = 25;
inline constexpr std::size_t kManyThreads = 8;

/// Deterministic integers in [lo, hi] from a fixed-seed engine.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}
  long uniform(long lo, long hi) {
    return lo + static_cast<long>(eng_() % static_cast<std::uint64_t>(hi - lo + 1));
  }

 private:
  std::mt19937_64 eng_;
};

/// Interior point of the simplex with positive numerators at most 12.
inline WeightVector random_simplex_weight(Rng& g, std::size_t n) {
  std::vector<long> k(n);
  long s = 0;
  for (auto& v : k) s += (v = g.uniform(1, 12));
  WeightVector r;
  for (long v : k) r.push_back(make_rational(v, s));
  return r;
}

/// Rank-one leaves of an expression, assembled directly from the tree:
/// dual negates, tensor adds pairwise, sum concatenates.
inline std::vector<LaurentElement> oracle_leaves(const Expr& e, long p, std::size_t n) {
  switch (e.kind) {
    case Expr::Kind::dwork: return {e.f};
    case Expr::Kind::dual: {
      auto v = oracle_leaves(*e.children[0], p, n);
      for (auto& f : v) f = -f;
      return v;
    }
    case Expr::Kind::sum: {
      auto a = oracle_leaves(*e.children[0], p, n);
      auto b = oracle_leaves(*e.children[1], p, n);
      a.insert(a.end(), b.begin(), b.end());
      return a;
    }
    case Expr::Kind::tensor: {
      auto a = oracle_leaves(*e.children[0], p, n);
      auto b = oracle_leaves(*e.children[1], p, n);
      std::vector<LaurentElement> out;
      for (const auto& f : a)
        for (const auto& g : b) out.push_back(f + g);
      return out;
    }
    case Expr::Kind::explicit_file:
      fail(ErrorKind::unsupported, "the rank-one oracle does not apply to explicit blocks");
  }
  return {};
}

/// Unnormalized oracle breaks, decreasing.
inline std::vector<Rational> oracle_raw(const std::vector<LaurentElement>& leaves, const WeightVector& r) {
  std::vector<Rational> out;
  for (const auto& f : leaves) out.push_back(rank1_oracle_break(f, r));
  std::sort(out.begin(), out.end(), [](const Rational& a, const Rational& b) { return b < a; });
  return out;
}

inline long largest_power_at_most(long p, long n) {
  long q = 1;
  while (q * p <= n) q *= p;
  return q;
}

inline std::vector<std::string> sorted_pieces(const PolyhedralFunction& f, const Rational& scale) {
  std::vector<std::string> out;
  for (auto piece : f.pieces()) {
    for (auto& a : piece.a) a /= scale;
    piece.b /= scale;
    out.push_back(normalize_on_simplex(piece).str());
  }
  std::sort(out.begin(), out.end());
  return out;
}

struct Tally {
  long checks = 0;
  std::vector<std::string> failures;

  void expect(bool ok, const std::string& what) {
    ++checks;
    if (!ok) failures.push_back(what);
  }
  CriterionResult result(int id, std::string title, const std::string& summary) const {
    CriterionResult r{id, std::move(title), failures.empty(), ""};
    if (failures.empty()) {
      r.detail = summary + " (" + std::to_string(checks) + " checks)";
    } else {
      r.detail = std::to_string(failures.size()) + "/" + std::to_string(checks) + " failed; first: " + failures.front();
    }
    return r;
  }
};

template <class F>
void guarded(Tally& t, const std::string& what, F&& f) {
  try {
    f();
  } catch (const std::exception& e) {
    t.expect(false, what + " threw: " + e.what());
  }
}

// 1 --------------------------------------------------------------------------

inline CriterionResult conductor_table() {
  Tally t;
  long pairs = 0;
  const long p = 3;
  LaurentElement f = LaurentElement::monomial(p, {-1, -1});
  PreparedModule m(make_dwork(f));
  for (long a = 1; a <= 10; ++a)
    for (long b = 1; b <= 10; ++b) {
      if (std::gcd(a, b) != 1) continue;
      ++pairs;
      const std::string at = "(a,b)=(" + std::to_string(a) + "," + std::to_string(b) + ")";
      guarded(t, at, [&] {
        // u = 1/x, w = 1/y with x^-a ~ y^-b: v(u) = b, v(w) = a
        WeightVector r{Rational(b), Rational(a)};
        auto nat = break_multiset(m, r, Normalization::natural());
        t.expect(nat.swan == Rational(a + b), at + " natural swan " + to_string(nat.swan));
        auto yn = break_multiset(m, r, Normalization::by_variable(1));
        t.expect(yn.swan == 1 + make_rational(b, a), at + " y-normalized swan " + to_string(yn.swan));
      });
    }
  return t.result(1, "Dwork conductor table",
                  std::to_string(pairs) + " coprime pairs, natural a+b and y-normalized 1+b/a exact");
}

// 2 --------------------------------------------------------------------------

inline CriterionResult convex_variation(const Zoo& zoo, std::size_t threads, std::vector<std::string>* dumps) {
  Tally t;
  std::set<std::size_t> ranks;
  std::size_t modules = 0;
  for (const ZooEntry* e : zoo.section("modules")) {
    guarded(t, e->name, [&] {
      PreparedModule pm(build_module(e->doc));
      ++modules;
      ranks.insert(pm.rank());
      BreakSurface s = sweep_simplex(pm, kGrid, threads);
      if (dumps) dumps->push_back(to_json(s).dump());
      t.expect(s.excluded.empty(), e->name + ": " + std::to_string(s.excluded.size()) + " grid points excluded");
      for (const auto& f : s.functions) {
        t.expect(f.convex.ok, e->name + " " + f.name + " not convex: " + f.convex.witness);
        t.expect(f.integral.ok, e->name + " " + f.name + " Hasse-Arf: " + f.integral.witness);
        t.expect(f.fit.has_value(), e->name + " " + f.name + " fit: " + f.fit_error);
        if (f.fit) t.expect(f.fit->all_transintegral(), e->name + " " + f.name + " fit not transintegral");
      }
      const Rational dfact = factorial(static_cast<long>(s.rank));
      for (std::size_t i = 1; i <= s.rank; ++i) {
        const std::string key = "B_" + std::to_string(i);
        if (!e->expected.contains(key) || !s.functions[i - 1].fit) continue;
        std::vector<std::string> want = e->expected[key].get<std::vector<std::string>>();
        std::sort(want.begin(), want.end());
        auto got = sorted_pieces(*s.functions[i - 1].fit, dfact);
        t.expect(got == want, e->name + " " + key + " pieces differ from the expected fit");
      }
    });
  }
  t.expect(modules >= 6, "fewer than 6 zoo modules");
  t.expect(ranks.count(1) && ranks.count(4), "zoo does not span ranks 1 to 4");
  return t.result(2, "Convex-variation suite",
                  std::to_string(modules) + " modules, ranks 1-4, grid N=" + std::to_string(kGrid) +
                      ": d!B_i and B_d convex, Hasse-Arf, fitted");
}

// 3 --------------------------------------------------------------------------

inline CriterionResult engine_oracle(const Zoo& zoo) {
  Tally t;
  Rng g(kSeed);
  std::size_t modules = 0;
  for (const ZooEntry* e : zoo.section("modules")) {
    guarded(t, e->name, [&] {
      const ModuleSpecDoc& doc = e->doc;
      const std::size_t n = doc.vars.size();
      const auto leaves = oracle_leaves(*doc.expr, doc.p, n);
      NablaModule m = build_module(doc);
      PreparedModule pm(m);
      t.expect(leaves.size() == pm.rank(), e->name + ": oracle leaf count differs from rank");
      ++modules;
      for (int k = 0; k < kOracleSamples; ++k) {
        const WeightVector r = random_simplex_weight(g, n);
        const std::string at = e->name + " at (" + to_string(r) + ")";
        auto raw = oracle_raw(leaves, r);
        auto bd = break_multiset(pm, r, Normalization::sum());
        t.expect(bd.breaks == raw, at + ": engine " + to_string(bd.breaks) + " vs oracle " + to_string(raw));
        auto sm = pm.scale_multiset(r, kSmallC);
        std::vector<Rational> scaled;
        for (const auto& b : raw) scaled.push_back(kSmallC * b);
        t.expect(sm.masked == 0 && sm.values == scaled,
                 at + ": scales at c=1/64 are " + to_string(sm.values) + ", expected " + to_string(scaled));
      }
      // spectral bracket: L <= S <= L + 1/((p-1) q), q = largest power of p <= nmax
      const WeightVector r = random_simplex_weight(g, n);
      auto sm = pm.scale_multiset(r, kSpectralC);
      const Rational top = sm.values.empty() ? Rational(0) : sm.values.front();
      Rational lower = 0;
      for (std::size_t axis = 0; axis < n; ++axis)
        for (const auto& v : spectral_estimate(m, axis, r, kSpectralC, kSpectralNmax)) lower = std::max(lower, v);
      const Rational gap = make_rational(1, (doc.p - 1) * largest_power_at_most(doc.p, kSpectralNmax));
      t.expect(lower <= top && top <= lower + gap,
               e->name + ": spectral bracket " + to_string(lower) + " <= " + to_string(top) + " <= " +
                   to_string(lower + gap) + " fails");
    });
  }
  return t.result(3, "Engine-oracle equivalence",
                  std::to_string(modules) + " modules x " + std::to_string(kOracleSamples) +
                      " seeded weights exact; spectral bracket at nmax=" + std::to_string(kSpectralNmax) + " holds");
}

// 4, 5 -----------------------------------------------------------------------

inline std::set<long> roots_mod_p(const std::vector<long>& coeffs, long p) {
  std::set<long> out;
  for (long x = 1; x < p; ++x) {
    long v = 0;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) v = ((v * x + *it) % p + p) % p;
    if (v == 0) out.insert(x);
  }
  return out;
}

inline CriterionResult subharmonicity(const Zoo& zoo) {
  Tally t;
  for (const ZooEntry* e : zoo.section("surfaces")) {
    guarded(t, e->name, [&] {
      SurfaceModel m = surface_model_from(e->doc, e->name);
      SurfaceReport rep = analyze_surface(m);
      const auto& x = e->expected;
      t.expect(rep.subharmonic(), e->name + ": lhs " + to_string(rep.lhs) + " < rhs " + to_string(rep.rhs));
      t.expect(rep.exposed > 0 || rep.equality(), e->name + ": strict inequality without turning points");
      if (x.contains("lhs")) t.expect(to_string(rep.lhs) == x["lhs"].get<std::string>(), e->name + ": lhs " + to_string(rep.lhs));
      if (x.contains("rhs")) t.expect(to_string(rep.rhs) == x["rhs"].get<std::string>(), e->name + ": rhs " + to_string(rep.rhs));
      if (x.contains("ell")) t.expect(rep.ell.ell == x["ell"].get<long>(), e->name + ": ell " + std::to_string(rep.ell.ell));
      if (x.contains("exposed")) {
        t.expect(static_cast<long>(rep.exposed) == x["exposed"].get<long>(),
                 e->name + ": " + std::to_string(rep.exposed) + " exposed turning points");
      }
      if (e->name == "cubic_over_t") {
        std::set<long> at;
        for (const auto& pt : rep.points)
          if (pt.exposed && pt.point.kind == ZPoint::Kind::interior) at.insert(pt.point.z);
        t.expect(at == roots_mod_p({1, 0, 0, 1}, m.prime()), e->name + ": exposed points are not the roots of x^3+1");
      }
      SwanDivisorReport sd = swan_divisor_check(m, kGrid);
      t.expect(sd.passes(), e->name + ": intersection inequality fails");
      if (x.contains("swan_divisor_t0")) {
        const std::size_t i = m.ambient.find("t:0");
        t.expect(to_string(sd.swan_divisor[i]) == x["swan_divisor_t0"].get<std::string>(),
                 e->name + ": Swan divisor coefficient on t:0 is " + to_string(sd.swan_divisor[i]));
      }
      if (x.contains("intersection_t0")) {
        const std::size_t i = m.ambient.find("t:0");
        for (const auto& c : sd.components)
          if (c.ray == i)
            t.expect(to_string(c.intersection) == x["intersection_t0"].get<std::string>(),
                     e->name + ": t:0 . (Swan + l(K+D)) is " + to_string(c.intersection));
      }
    });
  }
  return t.result(4, "Subharmonicity identities",
                  std::to_string(zoo.section("surfaces").size()) +
                      " surface models: sum(Swan'+l) vs (2-2g)l - Z^2 Swan exact, exposed points at the roots of x^3+1");
}

inline CriterionResult monotonicity(const Zoo& zoo) {
  Tally t;
  long smooth = 0;
  for (const ZooEntry* e : zoo.section("surfaces")) {
    guarded(t, e->name, [&] {
      SurfaceReport rep = analyze_surface(surface_model_from(e->doc, e->name));
      for (const auto& pt : rep.points) {
        if (pt.crossing) continue;
        ++smooth;
        for (const auto& [i, v] : pt.monotonicity) {
          t.expect(v <= 0, e->name + " at " + pt.label + ": index " + std::to_string(i) + " value " + to_string(v));
          if (!pt.special) t.expect(v == 0, e->name + " at generic " + pt.label + ": value " + to_string(v));
        }
      }
      t.expect(rep.monotone && rep.generic_equality, e->name + ": report flags disagree");
      t.expect(rep.generic_law, e->name + ": generic slope differs from -l");
    });
  }
  return t.result(5, "Monotonicity", std::to_string(smooth) + " smooth points, equality at generic points");
}

// 6 --------------------------------------------------------------------------

inline CriterionResult turning_points(const Zoo& zoo) {
  Tally t;
  long scans = 0;
  auto slope_ok = [&](const TurningScan& s, const SurfaceModel& m) {
    ++scans;
    t.expect(s.slope_test_ok(), m.label + " at " + m.ambient.ray_names[s.first_ray] + "/" +
                                    m.ambient.ray_names[s.second_ray] + ": slope test fails");
  };
  for (const ZooEntry* e : zoo.section("crossings")) {
    guarded(t, e->name, [&] {
      SurfaceModel m = surface_model_from(e->doc, e->name);
      auto names = split_names(e->doc.param("crossing").value_or(""));
      if (names.size() != 2) fail(ErrorKind::usage, "crossing needs two divisors");
      TurningScan s = hidden_turning_scan(m, m.ambient.find(names[0]), m.ambient.find(names[1]), kGrid);
      slope_ok(s, m);
      const auto& x = e->expected;
      if (x.contains("hidden"))
        t.expect(s.hidden() == x["hidden"].get<bool>(), e->name + ": hidden flag " + (s.hidden() ? "true" : "false"));
      if (x.contains("kinks")) {
        std::set<std::string> got;
        for (std::size_t i = 0; i < s.f.size(); ++i)
          for (const auto& k : kinks(s, i)) got.insert(k.get<std::string>());
        auto want = x["kinks"].get<std::vector<std::string>>();
        t.expect(got == std::set<std::string>(want.begin(), want.end()), e->name + ": kink locations differ");
      }
    });
  }
  for (const ZooEntry* e : zoo.section("surfaces")) {
    guarded(t, e->name, [&] {
      SurfaceModel m = surface_model_from(e->doc, e->name);
      auto d = boundary_components(m);
      const auto& a = m.ambient;
      for (std::size_t i = 0; i < a.size(); ++i) {
        const std::size_t j = a.next(i);
        if (d[i] && d[j]) slope_ok(hidden_turning_scan(m, i, j, kGrid), m);
      }
    });
  }
  return t.result(6, "Turning-point classification",
                  "hidden/affine flags and kinks as expected; slope test holds at " + std::to_string(scans) +
                      " scanned crossings");
}

// 7 --------------------------------------------------------------------------

/// Unit-coefficient Laurent polynomial with 1-3 monomials, poles up to 4,
/// no monomial with every exponent divisible by p.
inline LaurentElement random_leaf(Rng& g, long p, std::size_t n) {
  LaurentElement f(p, n);
  const long terms = g.uniform(1, 3);
  while (static_cast<long>(f.size()) < terms) {
    Exponent j(n);
    for (auto& x : j) x = g.uniform(-4, 1);
    if (detail::all_divisible(j, p)) continue;
    f.add_term(j, PadicScalar(p, Rational(g.uniform(1, p - 1))));
  }
  return f;
}

inline CriterionResult algebraic_laws() {
  Tally t;
  Rng g(kSeed + 7);
  for (int k = 0; k < kLawCases; ++k) {
    const long p = k % 2 ? 5 : 3;
    const std::size_t n = 2;
    const std::string tag = "case " + std::to_string(k);
    guarded(t, tag, [&] {
      LaurentElement f = random_leaf(g, p, n), h = random_leaf(g, p, n), u = random_leaf(g, p, n);
      const WeightVector r = random_simplex_weight(g, n);
      NablaModule a = make_dwork(f);
      NablaModule b = direct_sum({make_dwork(h), make_dwork(u)});

      auto self = break_multiset(tensor(a, make_dwork(-f)), r);
      t.expect(std::all_of(self.breaks.begin(), self.breaks.end(), [](const Rational& x) { return x == 0; }),
               tag + ": Dwork(f) x Dwork(-f) has breaks " + to_string(self.breaks));

      auto ba = break_multiset(a, r).breaks, bb = break_multiset(b, r).breaks;
      std::vector<Rational> uni = ba;
      uni.insert(uni.end(), bb.begin(), bb.end());
      std::sort(uni.begin(), uni.end(), [](const Rational& x, const Rational& y) { return y < x; });
      t.expect(break_multiset(direct_sum({a, b}), r).breaks == uni, tag + ": direct sum is not the multiset union");
      t.expect(break_multiset(dual(b), r).breaks == bb, tag + ": dual changes breaks");

      for (const NablaModule* m : {&a, &b}) t.expect(m->is_integrable(), tag + ": constructor not integrable");
      t.expect(tensor(a, b).is_integrable() && dual(a).is_integrable() && direct_sum({a, b}).is_integrable(),
               tag + ": combinator not integrable");
      t.expect(make_explicit(p, n, tensor(a, b).matrices()).is_integrable(), tag + ": explicit copy not integrable");
    });
  }
  guarded(t, "trivial", [&] { t.expect(make_trivial(3, 2).is_integrable(), "trivial module not integrable"); });
  return t.result(7, "Algebraic laws",
                  std::to_string(kLawCases) + " seeded cases: self-tensor trivial, sums are unions, dual preserves breaks, "
                                              "constructors integrable");
}

// 8 --------------------------------------------------------------------------

inline CriterionResult determinism(const Zoo& zoo, const std::vector<std::string>& reference) {
  Tally t;
  std::vector<std::string> one, many;
  for (const ZooEntry* e : zoo.section("modules")) {
    guarded(t, e->name, [&] {
      PreparedModule pm(build_module(e->doc));
      one.push_back(to_json(sweep_simplex(pm, kGrid, 1)).dump());
      many.push_back(to_json(sweep_simplex(pm, kGrid, kManyThreads)).dump());
    });
  }
  t.expect(one == many, "sweep documents differ between 1 and " + std::to_string(kManyThreads) + " threads");
  t.expect(one == reference, "sweep documents differ from the configured-thread run");
  for (const ZooEntry* e : zoo.section("surfaces")) {
    guarded(t, e->name, [&] {
      SurfaceModel m = surface_model_from(e->doc, e->name);
      t.expect(to_json(analyze_surface(m)).dump() == to_json(analyze_surface(m)).dump(),
               e->name + ": surface report not reproducible");
    });
  }
  return t.result(8, "Determinism", "serialized sweeps identical at 1, " + std::to_string(kManyThreads) +
                                        " and configured threads");
}

}  // namespace acceptance

inline std::vector<CriterionResult> run_acceptance(const Zoo& zoo, std::size_t threads = configured_threads()) {
  std::vector<CriterionResult> out;
  std::vector<std::string> dumps;
  out.push_back(acceptance::conductor_table());
  out.push_back(acceptance::convex_variation(zoo, threads, &dumps));
  out.push_back(acceptance::engine_oracle(zoo));
  out.push_back(acceptance::subharmonicity(zoo));
  out.push_back(acceptance::monotonicity(zoo));
  out.push_back(acceptance::turning_points(zoo));
  out.push_back(acceptance::algebraic_laws());
  out.push_back(acceptance::determinism(zoo, dumps));
  return out;
}

}  // namespace swanlab
