#include <swanlab/break_variation.hpp>
#include <swanlab/serialize.hpp>

#include <gtest/gtest.h>

using namespace swanlab;

namespace {

LaurentElement mono(long p, Exponent j, Rational c = 1) { return LaurentElement::monomial(p, j, c); }

NablaModule two_leaf(long p = 3) { return direct_sum({make_dwork(mono(p, {-2, -1})), make_dwork(mono(p, {-1, -2}))}); }

}  // namespace

TEST(BreakMultiset, TrivialIsZero) {
  auto b = break_multiset(make_trivial(3, 2), {make_rational(1, 3), make_rational(2, 3)});
  EXPECT_EQ(b.breaks, (std::vector<Rational>{0}));
  EXPECT_EQ(b.swan, Rational(0));
}

TEST(BreakMultiset, NaturalNormalization) {
  auto m = make_dwork(mono(3, {-1, -1}));
  auto b = break_multiset(m, {Rational(2), Rational(3)}, Normalization::natural());
  EXPECT_EQ(b.swan, Rational(5));
  EXPECT_EQ(break_multiset(m, {Rational(4), Rational(6)}, Normalization::natural()).swan, Rational(5));
  EXPECT_EQ(break_multiset(m, {Rational(2), Rational(3)}, Normalization::by_variable(1)).swan, make_rational(5, 3));
}

TEST(BreakMultiset, DominantAxes) {
  auto b = break_multiset(make_dwork(mono(3, {-2, -1})), {make_rational(1, 2), make_rational(1, 2)});
  ASSERT_EQ(b.dominant.size(), 1u);
  EXPECT_EQ(b.dominant[0], (std::vector<std::size_t>{0, 1}));
  auto c = break_multiset(make_dwork(mono(3, {-1, -3})), {make_rational(1, 2), make_rational(1, 2)});
  ASSERT_EQ(c.dominant.size(), 1u);
  EXPECT_EQ(c.dominant[0], (std::vector<std::size_t>{0}));
}

TEST(BreakMultiset, BadWeights) {
  auto m = make_dwork(mono(3, {-1, -1}));
  EXPECT_THROW(break_multiset(m, {Rational(0), Rational(0)}), Error);
  EXPECT_THROW(break_multiset(m, {Rational(-1), Rational(2)}), Error);
  EXPECT_THROW(break_multiset(m, {Rational(1)}), Error);
}

TEST(Sweep, LxyIsConstantOne) {
  auto s = sweep_simplex(make_dwork(mono(3, {-1, -1})), 12, 2);
  ASSERT_TRUE(s.passes());
  ASSERT_TRUE(s.functions[0].fit);
  EXPECT_EQ(s.functions[0].fit->pieces().size(), 1u);
  EXPECT_EQ(s.functions[0].fit->pieces()[0].str(), "0/1,0/1;1/1");
  EXPECT_TRUE(s.functions[0].fit->all_integral());
}

TEST(Sweep, TwoLeafSum) {
  auto s = sweep_simplex(two_leaf(), 12, 2);
  ASSERT_TRUE(s.passes());
  ASSERT_EQ(s.functions.size(), 3u);
  const auto& b1 = *s.functions[0].fit;  // 2! * B_1
  ASSERT_EQ(b1.pieces().size(), 2u);
  EXPECT_EQ(b1.pieces()[0].str(), "0/1,2/1;2/1");
  EXPECT_EQ(b1.pieces()[1].str(), "2/1,0/1;2/1");
  ASSERT_EQ(s.functions[0].loci.size(), 1u);
  EXPECT_EQ(s.functions[0].loci[0].str(), "-2/1,2/1;0/1 = 0");
  EXPECT_EQ(s.functions[2].fit->pieces().front().str(), "0/1,0/1;3/1");
}

TEST(Sweep, BoundaryPointsExcludedNotFatal) {
  // 1/(uw) + 1/u^3: the 3-divisible monomial only ties with the top at w-weight 0
  auto m = make_dwork(mono(3, {-1, -1}) + mono(3, {-3, 0}));
  auto s = sweep_simplex(m, 6, 1);
  ASSERT_EQ(s.excluded.size(), 1u);
  EXPECT_EQ(s.excluded[0].r, (Point{Rational(1), Rational(0)}));
  EXPECT_EQ(to_json(s)["excluded"].size(), s.excluded.size());
}

TEST(Sweep, CsvHeader) {
  auto s = sweep_simplex(two_leaf(), 4, 1);
  auto csv = to_csv(s);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "r_1,r_2,b_1,b_2,swan");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 6);
}

TEST(Sweep, ThreadCountDoesNotMatter) {
  auto m = PreparedModule(two_leaf(5));
  EXPECT_EQ(to_json(sweep_simplex(m, 8, 1)).dump(), to_json(sweep_simplex(m, 8, 6)).dump());
}

TEST(ParallelFor, RethrowsFirstByIndex) {
  try {
    parallel_for(10, 4, [](std::size_t i) {
      if (i == 3 || i == 7) throw Error(ErrorKind::invariant, "at " + std::to_string(i));
    });
    FAIL();
  } catch (const Error& e) {
    EXPECT_STREQ(e.what(), "at 3");
  }
}
