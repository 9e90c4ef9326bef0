#include <swanlab/serialize.hpp>
#include <swanlab/surface_variation.hpp>

#include <gtest/gtest.h>

using namespace swanlab;

namespace {

LaurentElement mono(long p, Exponent j, Rational c = 1) { return LaurentElement::monomial(p, j, c); }

SurfaceModel model(const LaurentElement& f, const std::string& z = "t:0", Ambient a = p1xp1()) {
  return make_surface_model(a, a.find(z), make_dwork(f), "test");
}

const PointReport& at(const SurfaceReport& r, const std::string& label) {
  for (const auto& p : r.points)
    if (p.label == label) return p;
  throw std::runtime_error("no point " + label);
}

}  // namespace

TEST(Ambient, IntersectionNumbers) {
  auto a = p1xp1();
  for (std::size_t i = 0; i < 4; ++i) EXPECT_EQ(a.intersection(i, i), 0);
  EXPECT_EQ(a.intersection(0, 1), 1);
  EXPECT_EQ(a.intersection(0, 2), 0);
  auto b = p2();
  for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(b.intersection(i, i), 1);
  EXPECT_THROW(a.find("y:0"), Error);
}

TEST(PointBreaks, XOverT) {
  auto rep = analyze_surface(model(mono(3, {1, -1})));
  ASSERT_EQ(rep.points.size(), 4u);
  const auto& zero = rep.points.front();
  EXPECT_EQ(zero.breaks, (std::vector<AffineRho>{AffineRho(1, -1)}));
  EXPECT_EQ(zero.swan_slope(), Rational(-1));
  const auto& gen = rep.points[1];
  EXPECT_EQ(gen.breaks, (std::vector<AffineRho>{AffineRho(1, 0)}));
  EXPECT_EQ(gen.swan_slope(), Rational(0));
  const auto& inf = rep.points.back();
  EXPECT_EQ(inf.breaks, (std::vector<AffineRho>{AffineRho(1, 1)}));
  EXPECT_EQ(inf.swan_slope(), Rational(1));
}

TEST(Ell, Examples) {
  EXPECT_EQ(ell_invariant(model(mono(3, {1, -3}))).ell, 1);
  EXPECT_EQ(ell_invariant(model(mono(3, {1, -1}))).ell, 0);
  auto trivial = make_surface_model(p1xp1(), 1, make_trivial(3, 2));
  EXPECT_EQ(ell_invariant(trivial).ell, 0);
}

TEST(Subharmonicity, XTminusP) {
  auto rep = analyze_surface(model(mono(3, {1, -3})));
  EXPECT_EQ(rep.ell.ell, 1);
  EXPECT_EQ(rep.lhs, Rational(2));
  EXPECT_EQ(rep.rhs, Rational(2));
  EXPECT_TRUE(rep.equality());
  EXPECT_EQ(rep.exposed, 0u);
}

TEST(Subharmonicity, XOverT) {
  auto rep = analyze_surface(model(mono(3, {1, -1})));
  EXPECT_EQ(rep.lhs, Rational(0));
  EXPECT_EQ(rep.rhs, Rational(0));
}

TEST(Subharmonicity, CubicOverT) {
  const long p = 7;
  auto rep = analyze_surface(model(mono(p, {3, -1}) + mono(p, {0, -1})));
  EXPECT_EQ(rep.lhs, Rational(0));
  EXPECT_EQ(rep.rhs, Rational(0));
  EXPECT_EQ(rep.exposed, 3u);
  for (long z : {3L, 5L, 6L}) {
    const auto& pt = at(rep, "u=" + std::to_string(z));
    EXPECT_TRUE(pt.exposed);
    EXPECT_EQ(pt.swan_slope(), Rational(-1));
  }
  EXPECT_EQ(rep.points.back().swan_slope(), Rational(3));
}

TEST(Subharmonicity, PlaneLine) {
  auto rep = analyze_surface(model(mono(3, {1, -3}), "t:0", p2()));
  EXPECT_EQ(rep.lhs, Rational(-1));
  EXPECT_EQ(rep.rhs, Rational(-1));
}

TEST(Monotonicity, GenericEqualityAndExposedRoots) {
  auto rep = analyze_surface(model(mono(3, {1, -3})));
  EXPECT_TRUE(rep.monotone);
  EXPECT_TRUE(rep.generic_equality);
  const auto& gen = at(rep, "u=1");
  ASSERT_EQ(gen.monotonicity.size(), 1u);
  EXPECT_EQ(gen.monotonicity[0].second, Rational(0));

  auto cubic = analyze_surface(model(mono(7, {3, -1}) + mono(7, {0, -1})));
  const auto& root = at(cubic, "u=3");
  ASSERT_EQ(root.monotonicity.size(), 1u);
  EXPECT_EQ(root.monotonicity[0].second, Rational(-1));
}

TEST(Monotonicity, TrivialModule) {
  auto m = make_surface_model(p1xp1(), 1, make_trivial(3, 2));
  auto rep = analyze_surface(m);
  for (const auto& pt : rep.points)
    for (const auto& [i, v] : pt.monotonicity) EXPECT_EQ(v, Rational(0));
}

TEST(TurningScan, InverseSumIsHidden) {
  auto m = model(mono(3, {-1, 0}) + mono(3, {0, -1}));
  auto s = hidden_turning_scan(m, 0, 1, 12);
  EXPECT_TRUE(s.hidden());
  EXPECT_TRUE(s.slope_test_ok());
  EXPECT_EQ(kinks(s, 0), Json::array({"1/2"}));
  for (long k = 0; k <= 12; ++k)
    EXPECT_EQ(s.f[0][static_cast<std::size_t>(k)], std::max(make_rational(12 - k, 12), make_rational(k, 12)));
}

TEST(TurningScan, XTminusPEdgeAffine) {
  auto m = model(mono(3, {1, -3}));
  auto s = hidden_turning_scan(m, m.ambient.find("x:inf"), m.ambient.find("t:0"), 12);
  EXPECT_FALSE(s.hidden());
  EXPECT_EQ(s.f[0].front(), Rational(1));
  EXPECT_EQ(s.f[0].back(), Rational(3));
  EXPECT_EQ(s.right_slope_at_0[0], Rational(2));
}

TEST(TurningScan, TrivialAndNonAdjacent) {
  auto m = make_surface_model(p1xp1(), 1, make_trivial(3, 2));
  auto s = hidden_turning_scan(m, 0, 1, 6);
  EXPECT_FALSE(s.hidden());
  for (const auto& v : s.f[0]) EXPECT_EQ(v, Rational(0));
  EXPECT_THROW(hidden_turning_scan(m, 0, 2, 6), Error);
}

TEST(SwanDivisor, XTminusP) {
  auto m = model(mono(3, {1, -3}));
  auto sd = swan_divisor_check(m);
  EXPECT_TRUE(sd.passes());
  const auto& t0 = sd.components.front();
  EXPECT_EQ(t0.ray, 1u);
  EXPECT_EQ(t0.intersection, Rational(0));
  EXPECT_EQ(t0.bookkeeping, Rational(0));
}

TEST(SwanDivisor, LxyAtInfinity) {
  auto m = model(mono(3, {1, 1}), "t:inf");
  auto sd = swan_divisor_check(m);
  EXPECT_EQ(sd.swan_divisor, (std::vector<Rational>{0, 0, 1, 1}));
  EXPECT_TRUE(sd.passes());
}

TEST(SwanDivisor, TrivialModule) {
  auto sd = swan_divisor_check(make_surface_model(p1xp1(), 1, make_trivial(3, 2)));
  ASSERT_EQ(sd.components.size(), 1u);
  EXPECT_EQ(sd.components[0].intersection, Rational(0));
  EXPECT_TRUE(sd.passes());
}

TEST(SpecialLocus, UnsplitRowPolynomialRejected) {
  // x^2 + 1 has no root mod 3
  auto m = model(mono(3, {2, -1}) + mono(3, {0, -1}));
  EXPECT_THROW(special_interior_points(m), Error);
}

TEST(Reparametrization, GenericBreaksUnchanged) {
  // u -> 2u + t and u -> 2u + u^2 at a generic point
  for (auto f : {mono(3, {1, -3}), mono(3, {1, -1}) + mono(3, {0, -2}), mono(7, {3, -1}) + mono(7, {0, -1})}) {
    auto m = model(f);
    auto pt = generic_point(m);
    const long p = f.prime();
    auto base = point_breaks(m, pt);
    for (auto w : {mono(p, {0, 1}), mono(p, {2, 0})}) {
      auto moved = point_breaks(m, pt, std::make_pair(Rational(2), w));
      EXPECT_EQ(moved.breaks, base.breaks) << f.str({"x", "t"}) << " with " << w.str({"u", "v"});
    }
  }
}
