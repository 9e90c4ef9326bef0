#include <swanlab/newton_polygon.hpp>

#include <gtest/gtest.h>

using namespace swanlab;

using Pts = std::vector<std::pair<long, Rational>>;

TEST(NewtonPolygon, HullSlopes) {
  auto np = lower_hull(Pts{{0, 0}, {1, 2}, {2, 1}, {3, 3}});
  EXPECT_EQ(np.slopes(), (std::vector<Rational>{make_rational(1, 2), make_rational(1, 2), Rational(2)}));
  EXPECT_EQ(to_string(np), "0,0/1;2,1/1;3,3/1");
}

TEST(NewtonPolygon, Eisenstein) {
  auto np = lower_hull(Pts{{0, 1}, {1, 1}, {2, 0}});
  EXPECT_EQ(np.slopes(), (std::vector<Rational>{make_rational(-1, 2), make_rational(-1, 2)}));
}

TEST(NewtonPolygon, SinglePoint) { EXPECT_TRUE(lower_hull(Pts{{0, 5}}).slopes().empty()); }

TEST(NewtonPolygon, DuplicateAbscissaRejected) { EXPECT_THROW(lower_hull(Pts{{1, 0}, {1, 2}}), Error); }

TEST(Masking, SolvableLimit) {
  // roots of valuation >= sp give scale 0
  auto np = lower_hull(Pts{{0, 2}, {1, 1}, {2, 0}});
  auto rd = scales_from_polygon(np, Rational(1, 2), 3, 2);
  EXPECT_EQ(rd.visible, (std::vector<Rational>{0, 0}));
  EXPECT_EQ(rd.floor, Rational(0));
}

TEST(Masking, VisibleWindow) {
  // scales 5c and 2c at p = 3: 2c >= 5c/3, both visible
  const Rational c = make_rational(1, 100), sp = Rational(1);
  auto np = lower_hull(Pts{{0, (sp - 5 * c) + (sp - 2 * c)}, {1, sp - 5 * c}, {2, 0}});
  auto rd = scales_from_polygon(np, sp, 3, 2);
  EXPECT_EQ(rd.visible, (std::vector<Rational>{5 * c, 2 * c}));
  EXPECT_EQ(rd.masked, 0u);
}

TEST(Masking, HiddenEntry) {
  // scales 7c and c at p = 3: c < 7c/3 is masked
  const Rational c = make_rational(1, 100), sp = Rational(1);
  auto np = lower_hull(Pts{{0, (sp - 7 * c) + (sp - c)}, {1, sp - 7 * c}, {2, 0}});
  auto rd = scales_from_polygon(np, sp, 3, 2);
  EXPECT_EQ(rd.visible, (std::vector<Rational>{7 * c}));
  EXPECT_EQ(rd.masked, 1u);
  EXPECT_EQ(rd.floor, 7 * c / 3);
}

TEST(SplitBySlope, Examples) {
  auto np = lower_hull(Pts{{0, 0}, {1, 2}, {2, 1}, {3, 3}});
  auto [a, b] = split_by_slope(np, 2);
  EXPECT_EQ(a.slopes(), (std::vector<Rational>{make_rational(1, 2), make_rational(1, 2)}));
  EXPECT_EQ(b.slopes(), (std::vector<Rational>{2}));
  EXPECT_THROW(split_by_slope(lower_hull(Pts{{0, 0}, {1, 1}, {2, 2}}), 1), Error);
  auto [c, d] = split_by_slope(lower_hull(Pts{{0, 0}, {1, 0}, {2, 3}}), 1);
  EXPECT_EQ(c.slopes(), (std::vector<Rational>{0}));
  EXPECT_EQ(d.slopes(), (std::vector<Rational>{3}));
}
