#include <swanlab/laurent.hpp>
#include <swanlab/padic_scalar.hpp>

#include <gtest/gtest.h>

using namespace swanlab;

TEST(PadicScalar, PiSquaredAtThree) {
  PadicScalar pi = PadicScalar::pi(3);
  EXPECT_EQ(pi * pi, PadicScalar(3, Rational(-3)));
}

TEST(PadicScalar, SumCancelsPi) {
  PadicScalar pi = PadicScalar::pi(3);
  EXPECT_EQ((PadicScalar(3, Rational(1)) + pi) + (PadicScalar(3, Rational(2)) - pi), PadicScalar(3, Rational(3)));
}

TEST(PadicScalar, PiFourthAtFive) {
  PadicScalar x(5, Rational(1));
  for (int k = 0; k < 4; ++k) x = x * PadicScalar::pi(5);
  EXPECT_EQ(x, PadicScalar(5, Rational(-5)));
}

TEST(PadicScalar, Valuations) {
  for (long p : {2L, 3L, 5L, 7L}) EXPECT_EQ(PadicScalar::pi(p).valuation().value(), make_rational(1, p - 1));
  EXPECT_EQ((PadicScalar::pi(3) * Rational(3)).valuation().value(), make_rational(3, 2));
  EXPECT_TRUE(PadicScalar(3).valuation().is_infinite());
}

TEST(PadicScalar, DivisionByZeroIsAnError) {
  EXPECT_THROW(PadicScalar(3, Rational(1)) / PadicScalar(3), Error);
}

TEST(PadicScalar, InverseOfMixedElement) {
  PadicScalar x(5, std::vector<Rational>{2, 0, 1, 0, 0, 3});
  EXPECT_EQ(x * x.inverse(), PadicScalar(5, Rational(1)));
}

TEST(Laurent, GaussValuation) {
  const long p = 3;
  auto f = LaurentElement::monomial(p, {1, -1});
  EXPECT_EQ(f.gauss_valuation({make_rational(1, 2), make_rational(1, 3)}).value(), make_rational(1, 6));
  auto g = LaurentElement::constant(p, 2, Rational(3)) + LaurentElement::monomial(p, {1, 0});
  EXPECT_EQ(g.gauss_valuation({make_rational(1, 2), make_rational(1, 2)}).value(), make_rational(1, 2));
  auto h = LaurentElement::monomial(p, {2, 0}, PadicScalar::pi(p));
  EXPECT_EQ(h.gauss_valuation({make_rational(1, 4), Rational(0)}).value(), Rational(1));
}

TEST(Laurent, Derivatives) {
  const long p = 3;
  EXPECT_EQ(LaurentElement::monomial(p, {2, 1}).derive(0), LaurentElement::monomial(p, {1, 1}, Rational(2)));
  EXPECT_TRUE(LaurentElement::monomial(p, {1, 0}).derive(1).is_zero());
  auto d = LaurentElement::monomial(p, {1, -3}).derive(1);
  EXPECT_EQ(d, LaurentElement::monomial(p, {1, -4}, Rational(-3)));
  EXPECT_EQ(d.coefficient({1, -4}).valuation().value(), Rational(1));
}

TEST(Laurent, ValuationLineEnvelope) {
  const long p = 3;
  auto f = LaurentElement::monomial(p, {-1}) + LaurentElement::monomial(p, {-3}, Rational(3));
  auto line = f.valuation_line({Rational(1)});
  ASSERT_EQ(line.pieces().size(), 2u);
  EXPECT_EQ(line.pieces()[0].slope, Rational(-1));
  EXPECT_EQ(line.pieces()[1].start, make_rational(1, 2));
  EXPECT_EQ(line.pieces()[1].slope, Rational(-3));
  EXPECT_EQ(LaurentElement::monomial(p, {1}).valuation_line({Rational(1)}).first_piece().slope, Rational(1));
  auto one_plus_t = LaurentElement::constant(p, 1, Rational(1)) + LaurentElement::monomial(p, {1});
  EXPECT_EQ(one_plus_t.valuation_line({Rational(1)}).first_piece().slope, Rational(0));
}

TEST(Rational, ParseAndLattice) {
  EXPECT_EQ(rational_or_throw("-6/4"), make_rational(-3, 2));
  EXPECT_THROW(rational_or_throw("1/0"), Error);
  EXPECT_FALSE(in_lattice(make_rational(1, 6), {make_rational(1, 3), make_rational(2, 3)}));
  EXPECT_TRUE(in_lattice(make_rational(4, 3), {make_rational(1, 3), make_rational(2, 3)}));
}
