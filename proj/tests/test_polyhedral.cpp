#include <swanlab/polyhedral.hpp>

#include <gtest/gtest.h>

using namespace swanlab;

namespace {

AffineFunctional af(std::vector<Rational> a, Rational b) { return {std::move(a), std::move(b)}; }

GridSamples sample(std::size_t n, long N, const std::function<Rational(const Point&)>& f) {
  GridSamples s;
  for (const auto& x : simplex_grid(n, N)) s[x] = f(x);
  return s;
}

Rational one_plus_max(const Point& x) { return 1 + std::max(x[0], x[1]); }

}  // namespace

TEST(Polyhedral, Evaluation) {
  PolyhedralFunction f({af({1, 0}, 0), af({0, 1}, 0)}, simplex_constraints(2));
  EXPECT_EQ(f({make_rational(1, 3), make_rational(2, 3)}), make_rational(2, 3));
  PolyhedralFunction one({af({0, 0}, 1)}, simplex_constraints(2));
  EXPECT_EQ(one({make_rational(1, 5), make_rational(4, 5)}), Rational(1));
  PolyhedralFunction g({af({1, 0}, 1), af({0, 1}, 1)}, simplex_constraints(2));
  EXPECT_EQ(eval(g, {make_rational(1, 2), make_rational(1, 2)}), make_rational(3, 2));
  EXPECT_THROW(g({Rational(1), Rational(1)}), Error);
}

TEST(Polyhedral, IntegralityFlags) {
  EXPECT_TRUE(af({1, -2}, 3).is_integral());
  EXPECT_TRUE(af({1, -2}, make_rational(1, 2)).is_transintegral());
  EXPECT_FALSE(af({1, -2}, make_rational(1, 2)).is_integral());
  EXPECT_FALSE(af({make_rational(1, 2), 0}, 0).is_transintegral());
}

TEST(CheckConvex, Examples) {
  EXPECT_TRUE(check_convex(sample(2, 4, one_plus_max)).ok);
  auto bad = check_convex(sample(2, 4, [](const Point& x) -> Rational { return -x[0] * x[0]; }));
  EXPECT_FALSE(bad.ok);
  EXPECT_FALSE(bad.witness.empty());
  EXPECT_TRUE(check_convex(sample(3, 4, [](const Point&) { return Rational(7); })).ok);
}

TEST(CheckIntegral, Examples) {
  EXPECT_TRUE(check_integral_polyhedral(sample(2, 6, one_plus_max)).ok);
  GridSamples half{{{make_rational(1, 3), make_rational(2, 3)}, make_rational(1, 6)}};
  EXPECT_FALSE(check_integral_polyhedral(half).ok);
  EXPECT_TRUE(check_integral_polyhedral(sample(3, 5, [](const Point&) { return Rational(-2); })).ok);
}

TEST(Fit, TwoPiecesAndLocus) {
  auto f = fit_polyhedral(sample(2, 6, one_plus_max), 6);
  ASSERT_EQ(f.pieces().size(), 2u);
  EXPECT_EQ(f.pieces()[0].str(), "0/1,1/1;1/1");
  EXPECT_EQ(f.pieces()[1].str(), "1/1,0/1;1/1");
  auto loci = breakpoint_loci(f, simplex_grid(2, 6));
  ASSERT_EQ(loci.size(), 1u);
  EXPECT_EQ(loci[0].grid_points, (std::vector<Point>{{make_rational(1, 2), make_rational(1, 2)}}));
}

TEST(Fit, ConstantHasOnePieceNoLoci) {
  auto f = fit_polyhedral(sample(3, 4, [](const Point&) { return Rational(1); }), 4);
  EXPECT_EQ(f.pieces().size(), 1u);
  EXPECT_TRUE(breakpoint_loci(f, simplex_grid(3, 4)).empty());
}

TEST(Fit, ThreePiecesTwoLoci) {
  auto s = sample(2, 6, [](const Point& x) { return std::max({x[1], make_rational(2, 3), x[0]}); });
  auto f = fit_polyhedral(s, 6);
  EXPECT_EQ(f.pieces().size(), 3u);
  EXPECT_EQ(breakpoint_loci(f, simplex_grid(2, 6)).size(), 2u);
}

TEST(Fit, NonConvexRejected) {
  auto s = sample(2, 6, one_plus_max);
  s[{make_rational(1, 2), make_rational(1, 2)}] += 1;
  EXPECT_THROW(fit_polyhedral(s, 6), Error);
}

TEST(Fit, ThreeVariableMax) {
  auto s = sample(3, 6, [](const Point& x) { return std::max({x[0], x[1], x[2]}); });
  auto f = fit_polyhedral(s, 6);
  EXPECT_EQ(f.pieces().size(), 3u);
  EXPECT_EQ(breakpoint_loci(f, simplex_grid(3, 6)).size(), 3u);
  for (const auto& [x, v] : s) EXPECT_EQ(f(x), v);
}
