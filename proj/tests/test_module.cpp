#include <swanlab/nabla_module.hpp>
#include <swanlab/rank1_oracle.hpp>

#include <gtest/gtest.h>

using namespace swanlab;

namespace {

LaurentElement mono(long p, Exponent j, Rational c = 1) { return LaurentElement::monomial(p, j, c); }

}  // namespace

TEST(Dwork, MatricesOfProduct) {
  const long p = 3;
  auto m = make_dwork(mono(p, {1, 1}));
  auto pi = PadicScalar::pi(p);
  EXPECT_EQ(m.matrices()[0][0][0], LaurentElement::monomial(p, {0, 1}, pi));
  EXPECT_EQ(m.matrices()[1][0][0], LaurentElement::monomial(p, {1, 0}, pi));
}

TEST(Dwork, MatricesOfXOverTp) {
  const long p = 3;
  auto m = make_dwork(mono(p, {1, -3}));
  auto pi = PadicScalar::pi(p);
  EXPECT_EQ(m.matrices()[0][0][0], LaurentElement::monomial(p, {0, -3}, pi));
  EXPECT_EQ(m.matrices()[1][0][0], LaurentElement::monomial(p, {1, -4}, pi * Rational(-3)));
}

TEST(Dwork, ZeroRejected) { EXPECT_THROW(make_dwork(LaurentElement(3, 2)), Error); }

TEST(Combinators, TensorAndDualOfDwork) {
  const long p = 5;
  auto f = mono(p, {-1, 0}) + mono(p, {0, -2}, 3);
  auto g = mono(p, {-1, -1}, 2);
  EXPECT_EQ(tensor(make_dwork(f), make_dwork(g)).matrices(), make_dwork(f + g).matrices());
  EXPECT_EQ(dual(make_dwork(f)).matrices(), make_dwork(-f).matrices());
  auto s = direct_sum({make_dwork(f), make_dwork(g), make_trivial(p, 2)});
  EXPECT_EQ(s.rank(), 3u);
  EXPECT_TRUE(s.is_integrable());
}

TEST(Explicit, NonIntegrableRejected) {
  const long p = 3;
  Matrix nx{{mono(p, {0, 1})}}, ny{{LaurentElement(p, 2)}};
  EXPECT_THROW(make_explicit(p, 2, {nx, ny}), Error);
}

TEST(CyclicVector, RankOne) {
  const long p = 3;
  auto m = make_dwork(mono(p, {-2}));
  auto q = cyclic_vector(m.matrices(), 0);
  ASSERT_EQ(q.degree, 1u);
  // Q = T - g: a_0 = -g
  EXPECT_EQ(q.numerators[0] * LaurentElement::constant(p, 1, Rational(1)), -(m.matrices()[0][0][0] * q.denominator));
}

TEST(CyclicVector, TwoLeafSum) {
  // Dwork(x) + Dwork(2x): Q = T^2 - 3 pi T + 2 pi^2
  const long p = 5;
  auto m = direct_sum({make_dwork(mono(p, {1})), make_dwork(mono(p, {1}, 2))});
  auto q = cyclic_vector(m.matrices(), 0);
  ASSERT_EQ(q.degree, 2u);
  const auto pi = PadicScalar::pi(p);
  auto c = [&](const PadicScalar& s) { return LaurentElement::constant(p, 1, s); };
  EXPECT_EQ(q.numerators[1], c(pi * Rational(-3)) * q.denominator);
  EXPECT_EQ(q.numerators[0], c(pi * pi * Rational(2)) * q.denominator);
}

TEST(ScaleMultiset, TrivialModule) {
  auto s = scale_multiset(make_trivial(3, 2), {make_rational(1, 2), make_rational(1, 2)}, make_rational(1, 8));
  EXPECT_EQ(s.values, (std::vector<Rational>{0}));
}

TEST(ScaleMultiset, ArtinSchreierConductorOne) {
  const Rational c = make_rational(1, 8);
  auto s = scale_multiset(make_dwork(mono(3, {-1})), {Rational(1)}, c);
  EXPECT_EQ(s.values, (std::vector<Rational>{c}));
}

TEST(ScaleMultiset, TwoLeafSumAtCenter) {
  const long p = 3;
  const Rational c = make_rational(1, 64);
  auto m = direct_sum({make_dwork(mono(p, {-2, -1})), make_dwork(mono(p, {-1, -2}))});
  auto s = scale_multiset(m, {make_rational(1, 2), make_rational(1, 2)}, c);
  EXPECT_EQ(s.values, (std::vector<Rational>{3 * c / 2, 3 * c / 2}));
}

TEST(BreakGerms, XOverTpAtSmallR) {
  const long p = 3;
  PreparedModule m(make_dwork(mono(p, {1, -3})));
  const Rational r = make_rational(1, 4);
  auto g = m.break_germs(WeightVector{r, Rational(1)});
  EXPECT_EQ(g.slopes, (std::vector<Rational>{Rational(p) - r}));
  auto h = PreparedModule(make_dwork(mono(p, {0, 1}))).break_germs(WeightVector{r, Rational(1)});
  EXPECT_EQ(h.slopes, (std::vector<Rational>{0}));
}

TEST(BreakGerms, PDivisibleSupportRejected) {
  PreparedModule m(make_dwork(mono(3, {-3, 0})));
  try {
    m.break_germs(WeightVector{Rational(1), Rational(1)});
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::unsupported);
  }
}

TEST(Oracle, AgreesOnSupportedMonomials) {
  const long p = 5;
  auto f = mono(p, {-3, 1}) + mono(p, {-1, -2}, 2) + mono(p, {-6, 0}, 5);
  const WeightVector r{make_rational(2, 7), make_rational(5, 7)};
  auto bd = PreparedModule(make_dwork(f)).break_germs(r);
  EXPECT_EQ(bd.slopes, (std::vector<Rational>{rank1_oracle_break(f, r)}));
  EXPECT_EQ(rank1_oracle_break(f, r), make_rational(12, 7));
}

TEST(SpectralEstimate, TrivialIsZero) {
  for (const auto& v : spectral_estimate(make_trivial(3, 1), 0, {Rational(1)}, make_rational(1, 4), 8))
    EXPECT_EQ(v, Rational(0));
}

TEST(SpectralEstimate, BracketsArtinSchreier) {
  // L <= S <= L + 1/((p-1) q) with q = 3 the largest power of 3 below 8
  const Rational c = make_rational(1, 4);
  auto m = make_dwork(mono(3, {-1}));
  auto est = spectral_estimate(m, 0, {Rational(1)}, c, 8);
  ASSERT_EQ(est.size(), 8u);
  Rational lower = *std::max_element(est.begin(), est.end());
  Rational top = scale_multiset(m, {Rational(1)}, c).values.front();
  EXPECT_EQ(top, c);
  EXPECT_LE(lower, top);
  EXPECT_LE(top, lower + make_rational(1, 6));
}

TEST(SpectralEstimate, XOverTpConsistent) {
  const long p = 3;
  const Rational c = make_rational(1, 16), r = make_rational(1, 4);
  auto m = make_dwork(mono(p, {1, -3}));
  const WeightVector w{r, Rational(1)};
  Rational lower = 0;
  for (std::size_t axis = 0; axis < 2; ++axis)
    for (const auto& v : spectral_estimate(m, axis, w, c, 8)) lower = std::max(lower, v);
  Rational top = scale_multiset(m, w, c).values.front();
  EXPECT_EQ(top, c * (Rational(p) - r));
  EXPECT_LE(lower, top);
  EXPECT_LE(top, lower + make_rational(1, 6));
}

TEST(Explicit, BasisChangeInvariantAwayFromTheLimit) {
  // conjugate Dwork(1/x) + Dwork(2/x) by a constant unipotent matrix; at
  // c = 2 (p = 3) the roots are readable and the scales must agree
  const long p = 3;
  auto base = direct_sum({make_dwork(mono(p, {-1})), make_dwork(mono(p, {-1}, 2))});
  const Matrix& n = base.matrices()[0];
  auto one = LaurentElement::constant(p, 1, Rational(1));
  LaurentElement zero(p, 1);
  Matrix P{{one, one}, {zero, one}}, Pinv{{one, -one}, {zero, one}};
  Matrix conj = matrix::mul(Pinv, matrix::mul(n, P));
  auto a = make_explicit(p, 1, {n});
  auto b = make_explicit(p, 1, {conj});
  const WeightVector r{Rational(1)};
  const Rational c = 2;
  auto sa = scale_multiset(a, r, c), sb = scale_multiset(b, r, c);
  EXPECT_EQ(sa.values, sb.values);
  EXPECT_EQ(sa.masked, sb.masked);
  EXPECT_EQ(scale_multiset(base, r, c).values, sa.values);
}
