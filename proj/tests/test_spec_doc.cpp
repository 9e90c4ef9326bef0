#include <swanlab/spec_doc.hpp>

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

using namespace swanlab;

namespace {

ErrorKind kind_of(const std::string& text) {
  try {
    parse_spec(text);
  } catch (const Error& e) {
    return e.kind();
  }
  return ErrorKind::usage;
}

}  // namespace

TEST(Parser, DworkLeaf) {
  auto doc = parse_spec("p = 3; vars = x, t; dwork(1 * x^1 * t^-3)");
  EXPECT_EQ(doc.p, 3);
  EXPECT_EQ(doc.vars, (std::vector<std::string>{"x", "t"}));
  ASSERT_TRUE(doc.expr);
  EXPECT_EQ(doc.expr->kind, Expr::Kind::dwork);
  EXPECT_EQ(doc.expr->f, LaurentElement::monomial(3, {1, -3}));
}

TEST(Parser, Precedence) {
  auto doc = parse_spec("p = 5; vars = x;\ndwork(1*x^-1) (+) dual(dwork(2*x^-1)) (x) dwork(1*x^-2)");
  ASSERT_EQ(doc.expr->kind, Expr::Kind::sum);
  EXPECT_EQ(doc.expr->children[0]->kind, Expr::Kind::dwork);
  ASSERT_EQ(doc.expr->children[1]->kind, Expr::Kind::tensor);
  EXPECT_EQ(doc.expr->children[1]->children[0]->kind, Expr::Kind::dual);
  EXPECT_EQ(build_module(doc).rank(), 2u);
}

TEST(Parser, PiCoefficientsAndParams) {
  auto doc = parse_spec("p = 3; vars = u, w; weights = 2, 3; normalize = natural;\n"
                        "dwork(1 * pi^1 * u^-5 + -2/3 * w^-1)  # comment\n");
  EXPECT_EQ(doc.param("weights").value(), "2, 3");
  EXPECT_EQ(parse_rational_list(*doc.param("weights")), (std::vector<Rational>{2, 3}));
  EXPECT_EQ(doc.expr->f.coefficient({-5, 0}), PadicScalar::pi(3));
  EXPECT_EQ(doc.expr->f.coefficient({0, -1}), PadicScalar(3, make_rational(-2, 3)));
}

TEST(Parser, RoundTrip) {
  const std::string text =
      "p = 3; vars = u, w;\ngrid = 12;\n(dwork(1 * u^-2 * w^-1) (+) dwork(1 * u^-1 * w^-2)) (x) dual(dwork(1 * u^-1))\n";
  auto doc = parse_spec(text);
  EXPECT_EQ(parse_spec(print_spec(doc)), doc);
}

TEST(Parser, Errors) {
  EXPECT_EQ(kind_of("p = 4; vars = x; dwork(1 * x^-1)"), ErrorKind::parse);
  EXPECT_EQ(kind_of("p = 3; vars = x; dwork(1 * y^-1)"), ErrorKind::parse);
  EXPECT_EQ(kind_of("p = 3; vars = x; dwork(1 * x^-1"), ErrorKind::parse);
  EXPECT_EQ(kind_of("p = 3 vars = x;"), ErrorKind::parse);
  try {
    parse_spec("p = 3; vars = x;\n  dwork(1 * x^-1) (+) $");
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos) << e.what();
  }
}

TEST(Parser, ExplicitMatrixFile) {
  auto dir = std::filesystem::temp_directory_path() / "swanlab_parser_test";
  std::filesystem::create_directories(dir);
  {
    std::ofstream out(dir / "m.mat");
    out << "rank = 2;\naxis x:\n  1 * pi^1 * x^-2, 0;\n  0, 2 * pi^1 * x^-2;\n";
  }
  auto doc = parse_spec("p = 3; vars = x; explicit(\"m.mat\")", dir);
  ASSERT_EQ(doc.expr->kind, Expr::Kind::explicit_file);
  auto m = build_module(doc);
  EXPECT_EQ(m.rank(), 2u);
  EXPECT_EQ(parse_matrix_file(print_matrix_file(m.matrices(), doc.vars), 3, doc.vars), m.matrices());
  std::filesystem::remove_all(dir);
}

TEST(Parser, MissingMatrixFile) {
  EXPECT_THROW(parse_spec("p = 3; vars = x; explicit(\"/nonexistent/m.mat\")"), Error);
}
