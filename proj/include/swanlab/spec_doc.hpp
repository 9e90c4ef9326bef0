#pragma once

// Text format for module descriptions:
//
//   p = 3; vars = x, t;
//   pi = dwork;                        (optional)
//   weights = 2, 3; grid = 12;         (optional parameters)
//   dwork(1 * x^1 * t^-3) (+) dual(dwork(1 * t^-1))
//
// Operators: dual(...) binds tightest, then (x), then (+). Explicit
// matrices are read from a separate file: explicit("name.mat").

#include <swanlab/nabla_module.hpp>

#include <cctype>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

namespace swanlab {

struct Expr {
  enum class Kind { dwork, explicit_file, sum, tensor, dual };
  Kind kind = Kind::dwork;
  LaurentElement f;                // dwork
  std::string path;                // explicit_file, as written
  std::vector<Matrix> matrices;    // explicit_file, as loaded
  std::vector<std::shared_ptr<const Expr>> children;

  friend bool operator==(const Expr& a, const Expr& b) {
    if (a.kind != b.kind || a.children.size() != b.children.size()) return false;
    if (a.kind == Kind::dwork && !(a.f == b.f)) return false;
    if (a.kind == Kind::explicit_file && (a.path != b.path || a.matrices != b.matrices)) return false;
    for (std::size_t i = 0; i < a.children.size(); ++i)
      if (!(*a.children[i] == *b.children[i])) return false;
    return true;
  }
};

using ExprPtr = std::shared_ptr<const Expr>;

struct ModuleSpecDoc {
  long p = 2;
  std::vector<std::string> vars;
  bool pi_dwork = false;
  std::vector<std::pair<std::string, std::string>> params;  // in order of appearance
  ExprPtr expr;

  std::optional<std::string> param(const std::string& key) const {
    for (const auto& [k, v] : params)
      if (k == key) return v;
    return std::nullopt;
  }

  friend bool operator==(const ModuleSpecDoc& a, const ModuleSpecDoc& b) {
    return a.p == b.p && a.vars == b.vars && a.pi_dwork == b.pi_dwork && a.params == b.params &&
           ((!a.expr && !b.expr) || (a.expr && b.expr && *a.expr == *b.expr));
  }
};

namespace detail {

struct Token {
  enum class Kind { ident, number, string, punct, op_sum, op_tensor, end };
  Kind kind;
  std::string text;
  int line, column;
};

inline std::vector<Token> lex(const std::string& src) {
  std::vector<Token> out;
  int line = 1, col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t k) {
    for (std::size_t j = 0; j < k; ++j, ++i) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  auto error = [&](const std::string& msg) -> void {
    fail(ErrorKind::parse, "line " + std::to_string(line) + ", column " + std::to_string(col) + ": " + msg);
  };
  while (i < src.size()) {
    const char c = src[i];
    if (c == '#') {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    const int l = line, cl = col;
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_')) ++j;
      out.push_back({Token::Kind::ident, src.substr(i, j - i), l, cl});
      advance(j - i);
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      out.push_back({Token::Kind::number, src.substr(i, j - i), l, cl});
      advance(j - i);
    } else if (c == '"') {
      std::size_t j = src.find('"', i + 1);
      if (j == std::string::npos) error("unterminated string");
      out.push_back({Token::Kind::string, src.substr(i + 1, j - i - 1), l, cl});
      advance(j - i + 1);
    } else if (c == '(' && i + 2 < src.size() && src[i + 2] == ')' && (src[i + 1] == '+' || src[i + 1] == 'x') &&
               !out.empty() && out.back().kind == Token::Kind::punct && out.back().text == ")") {
      out.push_back({src[i + 1] == '+' ? Token::Kind::op_sum : Token::Kind::op_tensor, src.substr(i, 3), l, cl});
      advance(3);
    } else if (std::string("()/,;=*^+-:").find(c) != std::string::npos) {
      out.push_back({Token::Kind::punct, std::string(1, c), l, cl});
      advance(1);
    } else {
      error(std::string("unexpected character '") + c + "'");
    }
  }
  out.push_back({Token::Kind::end, "", line, col});
  return out;
}

class Parser {
 public:
  Parser(std::vector<Token> toks, std::filesystem::path base) : toks_(std::move(toks)), base_(std::move(base)) {}

  ModuleSpecDoc document() {
    ModuleSpecDoc doc;
    expect_ident("p");
    expect_punct("=");
    const Token& pt = expect(Token::Kind::number, "an integer");
    doc.p = std::stol(pt.text);
    if (!is_prime(doc.p)) error_at(pt, "p = " + pt.text + " is not prime");
    p_ = doc.p;
    expect_punct(";");
    expect_ident("vars");
    expect_punct("=");
    do {
      const Token& v = expect(Token::Kind::ident, "a variable name");
      if (v.text == "pi" || is_keyword(v.text)) error_at(v, "'" + v.text + "' is reserved");
      for (const auto& w : doc.vars)
        if (w == v.text) error_at(v, "duplicate variable '" + v.text + "'");
      doc.vars.push_back(v.text);
    } while (accept_punct(","));
    vars_ = doc.vars;
    expect_punct(";");
    while (peek().kind == Token::Kind::ident && toks_[pos_ + 1].kind == Token::Kind::punct &&
           toks_[pos_ + 1].text == "=") {
      const Token& key = next();
      next();
      if (key.text == "pi") {
        expect_ident("dwork");
        doc.pi_dwork = true;
      } else {
        doc.params.emplace_back(key.text, param_value(key));
      }
      expect_punct(";");
    }
    if (peek().kind == Token::Kind::end) error_at(peek(), "expected a module expression");
    doc.expr = sum();
    accept_punct(";");
    if (peek().kind != Token::Kind::end) error_at(peek(), "unexpected '" + peek().text + "' after the expression");
    return doc;
  }

  /// "rank = d;" then for each variable "axis NAME:" and d rows of d
  /// comma-separated entries, each row ending in ';'.
  std::vector<Matrix> matrix_file(long p, const std::vector<std::string>& vars) {
    p_ = p;
    vars_ = vars;
    expect_ident("rank");
    expect_punct("=");
    const Token& rt = expect(Token::Kind::number, "the rank");
    const std::size_t d = std::stoul(rt.text);
    if (d == 0 || d > 8) error_at(rt, "rank must be between 1 and 8");
    expect_punct(";");
    std::vector<std::optional<Matrix>> ms(vars.size());
    while (peek().kind != Token::Kind::end) {
      expect_ident("axis");
      const Token& name = expect(Token::Kind::ident, "a variable name");
      const std::size_t axis = var_index(name);
      if (ms[axis]) error_at(name, "axis '" + name.text + "' given twice");
      expect_punct(":");
      Matrix m;
      for (std::size_t row = 0; row < d; ++row) {
        std::vector<LaurentElement> entries;
        do entries.push_back(laurent());
        while (accept_punct(","));
        if (entries.size() != d) error_at(peek(), "row has " + std::to_string(entries.size()) + " entries, expected " + std::to_string(d));
        expect_punct(";");
        m.push_back(std::move(entries));
      }
      ms[axis] = std::move(m);
    }
    std::vector<Matrix> out;
    for (std::size_t i = 0; i < vars.size(); ++i) {
      if (!ms[i]) fail(ErrorKind::parse, "matrix file has no block for axis '" + vars[i] + "'");
      out.push_back(std::move(*ms[i]));
    }
    return out;
  }

 private:
  static bool is_keyword(const std::string& s) { return s == "dwork" || s == "dual" || s == "explicit"; }

  const Token& peek() const { return toks_[pos_]; }
  const Token& next() { return toks_[pos_ == toks_.size() - 1 ? pos_ : pos_++]; }

  [[noreturn]] void error_at(const Token& t, const std::string& msg) const {
    fail(ErrorKind::parse, "line " + std::to_string(t.line) + ", column " + std::to_string(t.column) + ": " + msg);
  }
  const Token& expect(Token::Kind k, const std::string& what) {
    if (peek().kind != k) error_at(peek(), "expected " + what + ", found '" + peek().text + "'");
    return next();
  }
  void expect_punct(const std::string& s) {
    if (!accept_punct(s)) error_at(peek(), "expected '" + s + "', found '" + peek().text + "'");
  }
  bool accept_punct(const std::string& s) {
    if (peek().kind == Token::Kind::punct && peek().text == s) {
      next();
      return true;
    }
    return false;
  }
  void expect_ident(const std::string& s) {
    if (peek().kind != Token::Kind::ident || peek().text != s)
      error_at(peek(), "expected '" + s + "', found '" + peek().text + "'");
    next();
  }
  std::size_t var_index(const Token& t) const {
    for (std::size_t i = 0; i < vars_.size(); ++i)
      if (vars_[i] == t.text) return i;
    error_at(t, "unknown identifier '" + t.text + "'");
  }

  std::string param_value(const Token& key) {
    std::string v;
    while (!(peek().kind == Token::Kind::punct && peek().text == ";")) {
      if (peek().kind == Token::Kind::end) error_at(peek(), "unterminated parameter '" + key.text + "'");
      const Token& t = next();
      if (t.text == ",")
        v += ", ";
      else
        v += t.text;
    }
    if (v.empty()) error_at(key, "empty value for '" + key.text + "'");
    return v;
  }

  ExprPtr sum() {
    ExprPtr left = product();
    while (peek().kind == Token::Kind::op_sum) {
      next();
      auto e = std::make_shared<Expr>();
      e->kind = Expr::Kind::sum;
      e->children = {left, product()};
      left = e;
    }
    return left;
  }
  ExprPtr product() {
    ExprPtr left = unary();
    while (peek().kind == Token::Kind::op_tensor) {
      next();
      auto e = std::make_shared<Expr>();
      e->kind = Expr::Kind::tensor;
      e->children = {left, unary()};
      left = e;
    }
    return left;
  }
  ExprPtr unary() {
    const Token& t = peek();
    if (accept_punct("(")) {
      ExprPtr e = sum();
      expect_punct(")");
      return e;
    }
    if (t.kind != Token::Kind::ident) error_at(t, "expected a module expression, found '" + t.text + "'");
    next();
    auto e = std::make_shared<Expr>();
    if (t.text == "dual") {
      expect_punct("(");
      e->kind = Expr::Kind::dual;
      e->children = {sum()};
      expect_punct(")");
    } else if (t.text == "dwork") {
      expect_punct("(");
      e->kind = Expr::Kind::dwork;
      e->f = laurent();
      if (e->f.is_zero()) error_at(t, "dwork of the zero function");
      expect_punct(")");
    } else if (t.text == "explicit") {
      expect_punct("(");
      const Token& path = expect(Token::Kind::string, "a quoted file name");
      e->kind = Expr::Kind::explicit_file;
      e->path = path.text;
      e->matrices = load_matrices(path);
      expect_punct(")");
    } else {
      error_at(t, "unknown identifier '" + t.text + "'");
    }
    return e;
  }

  Rational signed_rational() {
    bool neg = false;
    while (peek().kind == Token::Kind::punct && (peek().text == "-" || peek().text == "+")) {
      if (next().text == "-") neg = !neg;
    }
    const Token& n = expect(Token::Kind::number, "a number");
    Rational q{Integer(n.text)};
    if (accept_punct("/")) {
      const Token& d = expect(Token::Kind::number, "a denominator");
      Integer den(d.text);
      if (den == 0) error_at(d, "zero denominator");
      q = Rational(Integer(n.text), den);
      q.canonicalize();
    }
    return neg ? Rational(-q) : q;
  }

  long signed_int() {
    bool neg = accept_punct("-");
    const Token& n = expect(Token::Kind::number, "an exponent");
    long v = std::stol(n.text);
    return neg ? -v : v;
  }

  // term := scalar ("*" IDENT "^" SINT)* ; scalar := RATIONAL ["*" "pi" "^" INT]
  LaurentElement laurent() {
    LaurentElement f(p_, vars_.size());
    bool first = true;
    for (;;) {
      bool negate = false;
      if (!first) {
        if (accept_punct("-"))
          negate = true;
        else if (!accept_punct("+"))
          break;
      }
      first = false;
      Rational c = signed_rational();
      if (negate) c = -c;
      long pi_power = 0;
      Exponent j(vars_.size(), 0);
      while (accept_punct("*")) {
        const Token& id = expect(Token::Kind::ident, "'pi' or a variable");
        long e = 1;
        if (accept_punct("^")) e = signed_int();
        if (id.text == "pi") {
          if (e < 0) error_at(id, "negative power of pi");
          pi_power += e;
        } else {
          j[var_index(id)] += e;
        }
      }
      f.add_term(j, PadicScalar::pi_power(p_, pi_power) * c);
    }
    return f;
  }

  std::vector<Matrix> load_matrices(const Token& path) {
    std::filesystem::path full = base_ / path.text;
    std::ifstream in(full);
    if (!in) error_at(path, "cannot open matrix file '" + full.string() + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    try {
      Parser sub(lex(ss.str()), full.parent_path());
      return sub.matrix_file(p_, vars_);
    } catch (const Error& e) {
      fail(ErrorKind::parse, full.string() + ": " + e.what());
    }
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  std::filesystem::path base_;
  long p_ = 2;
  std::vector<std::string> vars_;
};

}  // namespace detail

/// Parses a module description. Explicit matrix files resolve against
/// `base_dir`.
inline ModuleSpecDoc parse_spec(const std::string& text, const std::filesystem::path& base_dir = ".") {
  detail::Parser parser(detail::lex(text), base_dir);
  return parser.document();
}

inline std::vector<Matrix> parse_matrix_file(const std::string& text, long p, const std::vector<std::string>& vars) {
  detail::Parser parser(detail::lex(text), ".");
  return parser.matrix_file(p, vars);
}

inline std::string print_expr(const Expr& e, const std::vector<std::string>& vars) {
  auto child = [&](const ExprPtr& c, Expr::Kind parent) {
    std::string s = print_expr(*c, vars);
    bool wrap = (c->kind == Expr::Kind::sum && parent == Expr::Kind::tensor);
    return wrap ? "(" + s + ")" : s;
  };
  switch (e.kind) {
    case Expr::Kind::dwork: return "dwork(" + e.f.str(vars) + ")";
    case Expr::Kind::explicit_file: return "explicit(\"" + e.path + "\")";
    case Expr::Kind::dual: return "dual(" + print_expr(*e.children[0], vars) + ")";
    case Expr::Kind::sum: {
      std::string r = print_expr(*e.children[1], vars);
      if (e.children[1]->kind == Expr::Kind::sum) r = "(" + r + ")";
      return child(e.children[0], e.kind) + " (+) " + r;
    }
    case Expr::Kind::tensor: {
      std::string r = child(e.children[1], e.kind);
      if (e.children[1]->kind == Expr::Kind::tensor) r = "(" + r + ")";
      return child(e.children[0], e.kind) + " (x) " + r;
    }
  }
  return "";
}

inline std::string print_spec(const ModuleSpecDoc& doc) {
  std::string out = "p = " + std::to_string(doc.p) + "; vars = ";
  for (std::size_t i = 0; i < doc.vars.size(); ++i) out += (i ? ", " : "") + doc.vars[i];
  out += ";\n";
  if (doc.pi_dwork) out += "pi = dwork;\n";
  for (const auto& [k, v] : doc.params) out += k + " = " + v + ";\n";
  if (doc.expr) out += print_expr(*doc.expr, doc.vars) + "\n";
  return out;
}

inline std::string print_matrix_file(const std::vector<Matrix>& ms, const std::vector<std::string>& vars) {
  std::string out = "rank = " + std::to_string(ms.empty() ? 0 : ms[0].size()) + ";\n";
  for (std::size_t i = 0; i < ms.size(); ++i) {
    out += "axis " + vars[i] + ":\n";
    for (const auto& row : ms[i]) {
      out += " ";
      for (std::size_t k = 0; k < row.size(); ++k) out += (k ? ", " : " ") + row[k].str(vars);
      out += ";\n";
    }
  }
  return out;
}

inline NablaModule build_module(const Expr& e, long p, std::size_t nvars) {
  switch (e.kind) {
    case Expr::Kind::dwork: return make_dwork(e.f);
    case Expr::Kind::explicit_file: return make_explicit(p, nvars, e.matrices, e.path);
    case Expr::Kind::dual: return dual(build_module(*e.children[0], p, nvars));
    case Expr::Kind::sum: {
      std::vector<NablaModule> parts;
      std::vector<const Expr*> leaves;  // nested sums, left to right
      auto walk = [&](auto&& self, const Expr& x) -> void {
        if (x.kind == Expr::Kind::sum) {
          self(self, *x.children[0]);
          self(self, *x.children[1]);
        } else {
          leaves.push_back(&x);
        }
      };
      walk(walk, e);
      for (const Expr* x : leaves) parts.push_back(build_module(*x, p, nvars));
      return direct_sum(parts);
    }
    case Expr::Kind::tensor:
      return tensor(build_module(*e.children[0], p, nvars), build_module(*e.children[1], p, nvars));
  }
  fail(ErrorKind::domain, "unreachable expression kind");
}

inline NablaModule build_module(const ModuleSpecDoc& doc) {
  if (!doc.expr) fail(ErrorKind::usage, "document has no module expression");
  return build_module(*doc.expr, doc.p, doc.vars.size());
}

/// Comma-separated rationals, as used by the weights parameter.
inline std::vector<Rational> parse_rational_list(const std::string& s) {
  std::vector<Rational> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(rational_or_throw(item));
  if (out.empty()) fail(ErrorKind::parse, "empty list");
  return out;
}

}  // namespace swanlab
