#pragma once

// Nabla-modules over the Laurent fraction field: constructors, cyclic
// vectors, and scale / break readings at weighted Gauss points.
//
// A module of rank d in n variables carries matrices N_1..N_n with
//   d_i(f e_k) = d_i(f) e_k + f sum_j (N_i)_{jk} e_j,
// i.e. in coordinates D_i v = d_i v + N_i v.

#include <swanlab/germ.hpp>
#include <swanlab/laurent.hpp>
#include <swanlab/newton_polygon.hpp>
#include <swanlab/piecewise_affine.hpp>
#include <swanlab/rank1_oracle.hpp>

#include <algorithm>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace swanlab {

using Matrix = std::vector<std::vector<LaurentElement>>;

namespace matrix {

inline Matrix zero(long p, std::size_t nvars, std::size_t d) {
  return Matrix(d, std::vector<LaurentElement>(d, LaurentElement(p, nvars)));
}

inline Matrix identity(long p, std::size_t nvars, std::size_t d) {
  Matrix m = zero(p, nvars, d);
  for (std::size_t k = 0; k < d; ++k) m[k][k] = LaurentElement::constant(p, nvars, Rational(1));
  return m;
}

inline Matrix mul(const Matrix& a, const Matrix& b) {
  const std::size_t d = a.size();
  Matrix c = zero(a[0][0].prime(), a[0][0].nvars(), d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t k = 0; k < d; ++k) {
      if (a[i][k].is_zero()) continue;
      for (std::size_t j = 0; j < d; ++j)
        if (!b[k][j].is_zero()) c[i][j] += a[i][k] * b[k][j];
    }
  return c;
}

inline Matrix add(Matrix a, const Matrix& b) {
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a.size(); ++j) a[i][j] += b[i][j];
  return a;
}

inline Matrix sub(Matrix a, const Matrix& b) {
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a.size(); ++j) a[i][j] -= b[i][j];
  return a;
}

inline Matrix derive(const Matrix& a, std::size_t axis) {
  Matrix c = a;
  for (auto& row : c)
    for (auto& x : row) x = x.derive(axis);
  return c;
}

inline Matrix neg_transpose(const Matrix& a) {
  Matrix c = a;
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a.size(); ++j) c[i][j] = -a[j][i];
  return c;
}

inline bool is_zero(const Matrix& a) {
  for (const auto& row : a)
    for (const auto& x : row)
      if (!x.is_zero()) return false;
  return true;
}

/// N_A (x) I + I (x) N_B, basis e_a (x) f_b at index a * dim(B) + b.
inline Matrix kronecker_sum(const Matrix& a, const Matrix& b) {
  const std::size_t da = a.size(), db = b.size();
  const auto& any = da ? a[0][0] : b[0][0];
  Matrix c = zero(any.prime(), any.nvars(), da * db);
  for (std::size_t i = 0; i < da; ++i)
    for (std::size_t k = 0; k < da; ++k)
      for (std::size_t j = 0; j < db; ++j) c[i * db + j][k * db + j] += a[i][k];
  for (std::size_t i = 0; i < da; ++i)
    for (std::size_t j = 0; j < db; ++j)
      for (std::size_t l = 0; l < db; ++l) c[i * db + j][i * db + l] += b[j][l];
  return c;
}

inline Matrix block_diagonal(const std::vector<const Matrix*>& blocks, long p, std::size_t nvars) {
  std::size_t d = 0;
  for (auto* b : blocks) d += b->size();
  Matrix c = zero(p, nvars, d);
  std::size_t off = 0;
  for (auto* b : blocks) {
    for (std::size_t i = 0; i < b->size(); ++i)
      for (std::size_t j = 0; j < b->size(); ++j) c[off + i][off + j] = (*b)[i][j];
    off += b->size();
  }
  return c;
}

/// Division-free determinant by dynamic programming over column subsets.
inline LaurentElement determinant(const Matrix& m, long p, std::size_t nvars) {
  const std::size_t d = m.size();
  if (d == 0) return LaurentElement::constant(p, nvars, Rational(1));
  std::vector<std::optional<LaurentElement>> dp(std::size_t(1) << d);
  dp[0] = LaurentElement::constant(p, nvars, Rational(1));
  for (std::size_t mask = 0; mask < dp.size(); ++mask) {
    if (!dp[mask] || dp[mask]->is_zero()) continue;
    const std::size_t row = static_cast<std::size_t>(__builtin_popcountll(mask));
    if (row == d) continue;
    for (std::size_t col = 0; col < d; ++col) {
      if (mask & (std::size_t(1) << col) || m[row][col].is_zero()) continue;
      const auto above = static_cast<unsigned>(__builtin_popcountll(mask >> (col + 1)));
      LaurentElement term = *dp[mask] * m[row][col];
      if (above % 2) term = -term;
      auto& slot = dp[mask | (std::size_t(1) << col)];
      if (slot)
        *slot += term;
      else
        slot = std::move(term);
    }
  }
  auto& full = dp.back();
  return full ? *full : LaurentElement(p, nvars);
}

}  // namespace matrix

/// Structural description of how a module was built.
struct StructureNode {
  enum class Kind { dwork, explicit_leaf, direct_sum, tensor, dual };
  Kind kind;
  LaurentElement f;                // dwork
  std::vector<Matrix> matrices;    // explicit_leaf
  std::string source;              // explicit_leaf: where the matrices came from
  std::vector<std::shared_ptr<const StructureNode>> children;
};

class NablaModule {
 public:
  long prime() const { return p_; }
  std::size_t nvars() const { return nvars_; }
  std::size_t rank() const { return rank_; }
  const std::vector<Matrix>& matrices() const { return matrices_; }
  const StructureNode& structure() const { return *structure_; }
  std::shared_ptr<const StructureNode> structure_ptr() const { return structure_; }

  /// d_i(N_j) - d_j(N_i) + [N_i, N_j] for every pair i < j must vanish.
  bool is_integrable() const {
    for (std::size_t i = 0; i < nvars_; ++i)
      for (std::size_t j = i + 1; j < nvars_; ++j) {
        Matrix lhs = matrix::sub(matrix::derive(matrices_[j], i), matrix::derive(matrices_[i], j));
        lhs = matrix::add(lhs, matrix::mul(matrices_[i], matrices_[j]));
        lhs = matrix::sub(lhs, matrix::mul(matrices_[j], matrices_[i]));
        if (!matrix::is_zero(lhs)) return false;
      }
    return true;
  }

  friend NablaModule make_dwork(const LaurentElement& f);
  friend NablaModule make_explicit(long p, std::size_t nvars, std::vector<Matrix> matrices,
                                   std::string source);
  friend NablaModule make_trivial(long p, std::size_t nvars);
  friend NablaModule direct_sum(const std::vector<NablaModule>& parts);
  friend NablaModule tensor(const NablaModule& a, const NablaModule& b);
  friend NablaModule dual(const NablaModule& a);

 private:
  long p_ = 2;
  std::size_t nvars_ = 0;
  std::size_t rank_ = 0;
  std::vector<Matrix> matrices_;
  std::shared_ptr<const StructureNode> structure_;
};

inline std::vector<Matrix> dwork_matrices(const LaurentElement& f) {
  std::vector<Matrix> ms;
  const PadicScalar pi = PadicScalar::pi(f.prime());
  for (std::size_t i = 0; i < f.nvars(); ++i) ms.push_back(Matrix{{pi * f.derive(i)}});
  return ms;
}

/// Rank one, N_i = pi * d_i f.
inline NablaModule make_dwork(const LaurentElement& f) {
  if (f.is_zero()) fail(ErrorKind::domain, "make_dwork: f must be nonzero");
  NablaModule m;
  m.p_ = f.prime();
  m.nvars_ = f.nvars();
  m.rank_ = 1;
  m.matrices_ = dwork_matrices(f);
  auto node = std::make_shared<StructureNode>();
  node->kind = StructureNode::Kind::dwork;
  node->f = f;
  m.structure_ = node;
  return m;
}

/// The rank-one module with zero connection (Dwork of the zero function).
inline NablaModule make_trivial(long p, std::size_t nvars) {
  NablaModule m;
  m.p_ = p;
  m.nvars_ = nvars;
  m.rank_ = 1;
  m.matrices_ = dwork_matrices(LaurentElement(p, nvars));
  auto node = std::make_shared<StructureNode>();
  node->kind = StructureNode::Kind::dwork;
  node->f = LaurentElement(p, nvars);
  m.structure_ = node;
  return m;
}

inline NablaModule make_explicit(long p, std::size_t nvars, std::vector<Matrix> matrices,
                                 std::string source = "") {
  if (matrices.size() != nvars)
    fail(ErrorKind::domain, "explicit module needs one matrix per variable");
  const std::size_t d = matrices.empty() ? 0 : matrices[0].size();
  if (d == 0) fail(ErrorKind::domain, "explicit module of rank 0");
  for (const auto& m : matrices) {
    if (m.size() != d) fail(ErrorKind::domain, "explicit matrices of different sizes");
    for (const auto& row : m) {
      if (row.size() != d) fail(ErrorKind::domain, "explicit matrix is not square");
      for (const auto& x : row)
        if (x.nvars() != nvars || x.prime() != p)
          fail(ErrorKind::domain, "explicit matrix entry over the wrong ring");
    }
  }
  NablaModule m;
  m.p_ = p;
  m.nvars_ = nvars;
  m.rank_ = d;
  m.matrices_ = matrices;
  auto node = std::make_shared<StructureNode>();
  node->kind = StructureNode::Kind::explicit_leaf;
  node->matrices = std::move(matrices);
  node->source = std::move(source);
  m.structure_ = node;
  if (!m.is_integrable()) fail(ErrorKind::invariant, "explicit matrices are not integrable");
  return m;
}

inline void check_compatible(const NablaModule& a, const NablaModule& b) {
  if (a.nvars() != b.nvars()) fail(ErrorKind::domain, "combining modules with different nvars");
  if (a.prime() != b.prime()) fail(ErrorKind::domain, "combining modules over different primes");
}

inline NablaModule direct_sum(const std::vector<NablaModule>& parts) {
  if (parts.empty()) fail(ErrorKind::domain, "direct sum of nothing");
  for (const auto& x : parts) check_compatible(parts[0], x);
  NablaModule m;
  m.p_ = parts[0].p_;
  m.nvars_ = parts[0].nvars_;
  auto node = std::make_shared<StructureNode>();
  node->kind = StructureNode::Kind::direct_sum;
  for (const auto& x : parts) {
    m.rank_ += x.rank_;
    node->children.push_back(x.structure_);
  }
  for (std::size_t i = 0; i < m.nvars_; ++i) {
    std::vector<const Matrix*> blocks;
    for (const auto& x : parts) blocks.push_back(&x.matrices_[i]);
    m.matrices_.push_back(matrix::block_diagonal(blocks, m.p_, m.nvars_));
  }
  m.structure_ = node;
  return m;
}

inline NablaModule tensor(const NablaModule& a, const NablaModule& b) {
  check_compatible(a, b);
  NablaModule m;
  m.p_ = a.p_;
  m.nvars_ = a.nvars_;
  m.rank_ = a.rank_ * b.rank_;
  for (std::size_t i = 0; i < m.nvars_; ++i)
    m.matrices_.push_back(matrix::kronecker_sum(a.matrices_[i], b.matrices_[i]));
  auto node = std::make_shared<StructureNode>();
  node->kind = StructureNode::Kind::tensor;
  node->children = {a.structure_, b.structure_};
  m.structure_ = node;
  return m;
}

inline NablaModule dual(const NablaModule& a) {
  NablaModule m;
  m.p_ = a.p_;
  m.nvars_ = a.nvars_;
  m.rank_ = a.rank_;
  for (const auto& n : a.matrices_) m.matrices_.push_back(matrix::neg_transpose(n));
  auto node = std::make_shared<StructureNode>();
  node->kind = StructureNode::Kind::dual;
  node->children = {a.structure_};
  m.structure_ = node;
  return m;
}

/// A summand after pushing duals and tensors down to the leaves. Dwork
/// blocks keep their function so support conditions can be checked.
struct Block {
  std::optional<LaurentElement> dwork;
  std::vector<Matrix> matrices;
  std::size_t rank() const { return matrices.empty() ? 0 : matrices[0].size(); }
};

namespace detail {

inline std::vector<Block> decompose(const StructureNode& node, long p, std::size_t nvars) {
  using Kind = StructureNode::Kind;
  switch (node.kind) {
    case Kind::dwork:
      return {Block{node.f, dwork_matrices(node.f)}};
    case Kind::explicit_leaf:
      return {Block{std::nullopt, node.matrices}};
    case Kind::direct_sum: {
      std::vector<Block> out;
      for (const auto& c : node.children) {
        auto part = decompose(*c, p, nvars);
        out.insert(out.end(), part.begin(), part.end());
      }
      return out;
    }
    case Kind::dual: {
      auto inner = decompose(*node.children[0], p, nvars);
      for (auto& b : inner) {
        if (b.dwork) {
          b.dwork = -*b.dwork;
          b.matrices = dwork_matrices(*b.dwork);
        } else {
          for (auto& m : b.matrices) m = matrix::neg_transpose(m);
        }
      }
      return inner;
    }
    case Kind::tensor: {
      auto left = decompose(*node.children[0], p, nvars);
      auto right = decompose(*node.children[1], p, nvars);
      std::vector<Block> out;
      for (const auto& a : left)
        for (const auto& b : right) {
          if (a.dwork && b.dwork) {
            LaurentElement g = *a.dwork + *b.dwork;
            out.push_back(Block{g, dwork_matrices(g)});
          } else {
            Block t;
            for (std::size_t i = 0; i < nvars; ++i)
              t.matrices.push_back(matrix::kronecker_sum(a.matrices[i], b.matrices[i]));
            out.push_back(std::move(t));
          }
        }
      return out;
    }
  }
  return {};
}

}  // namespace detail

/// Summands of M read from its structure tree.
inline std::vector<Block> decompose(const NablaModule& m) {
  return detail::decompose(m.structure(), m.prime(), m.nvars());
}

/// The Dwork functions of M if every summand is a Dwork leaf.
inline std::optional<std::vector<LaurentElement>> dwork_leaves(const NablaModule& m) {
  std::vector<LaurentElement> out;
  for (const auto& b : decompose(m)) {
    if (!b.dwork) return std::nullopt;
    out.push_back(*b.dwork);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Cyclic vectors and twisted polynomials

struct EngineOptions {
  std::size_t max_rank = 8;
  std::size_t max_candidates = 2000;
};

/// Q(T) = T^d + sum_k a_k T^k with Q(D_i) e = 0, a_k = numerators[k] / denominator.
struct TwistedPolynomial {
  std::size_t axis = 0;
  std::size_t degree = 0;
  std::vector<LaurentElement> cyclic_vector;
  std::vector<LaurentElement> numerators;
  LaurentElement denominator;
  std::size_t candidates_tried = 0;
};

/// Coefficient valuations as functions of the radius parameter c at weight r.
struct TwistedPolyProfile {
  std::size_t degree = 0;
  std::vector<PiecewiseAffine> coefficients;  // index k for a_k, k = 0..degree

  /// Points (k, v(a_k)) at c, infinite coefficients omitted.
  std::vector<std::pair<long, Rational>> points_at(const Rational& c) const {
    std::vector<std::pair<long, Rational>> pts;
    for (std::size_t k = 0; k < coefficients.size(); ++k)
      if (!coefficients[k].is_infinite()) pts.emplace_back(static_cast<long>(k), coefficients[k](c));
    return pts;
  }
};

namespace detail {

inline std::vector<LaurentElement> apply_connection(const Matrix& n, std::size_t axis,
                                                    const std::vector<LaurentElement>& v) {
  std::vector<LaurentElement> out;
  out.reserve(v.size());
  for (std::size_t j = 0; j < v.size(); ++j) {
    LaurentElement acc = v[j].derive(axis);
    for (std::size_t k = 0; k < v.size(); ++k)
      if (!n[j][k].is_zero() && !v[k].is_zero()) acc += n[j][k] * v[k];
    out.push_back(std::move(acc));
  }
  return out;
}

// Candidate vectors in a fixed order: small integer coordinates by max-norm,
// then the staircase (1, t, t^2, ...), then coordinates in {0, 1, t, t^2}.
class CandidateStream {
 public:
  CandidateStream(long p, std::size_t nvars, std::size_t d, std::size_t axis)
      : p_(p), nvars_(nvars), d_(d), axis_(axis) {
    for (long bound = 1; bound <= 2; ++bound) integer_phase(bound);
    std::vector<LaurentElement> stair;
    for (std::size_t k = 0; k < d_; ++k) stair.push_back(power(static_cast<long>(k)));
    queue_.push_back(stair);
    std::vector<LaurentElement> alphabet = {LaurentElement(p, nvars), power(0), power(1), power(2)};
    std::vector<std::size_t> idx(d_, 0);
    for (;;) {
      std::vector<LaurentElement> v;
      for (auto i : idx) v.push_back(alphabet[i]);
      queue_.push_back(v);
      std::size_t k = 0;
      while (k < d_ && ++idx[k] == alphabet.size()) idx[k++] = 0;
      if (k == d_) break;
    }
  }
  const std::vector<std::vector<LaurentElement>>& all() const { return queue_; }

 private:
  LaurentElement power(long e) const {
    Exponent j(nvars_, 0);
    j[axis_] = e;
    return LaurentElement::monomial(p_, j, Rational(1));
  }
  void integer_phase(long bound) {
    std::vector<long> v(d_, -bound);
    for (;;) {
      long mx = 0;
      for (long x : v) mx = std::max(mx, x < 0 ? -x : x);
      if (mx == bound) {
        std::vector<LaurentElement> e;
        for (long x : v) e.push_back(LaurentElement::constant(p_, nvars_, Rational(x)));
        queue_.push_back(e);
      }
      std::size_t k = d_;
      while (k-- > 0) {
        if (++v[k] <= bound) break;
        v[k] = -bound;
        if (k == 0) return;
      }
    }
  }
  long p_;
  std::size_t nvars_, d_, axis_;
  std::vector<std::vector<LaurentElement>> queue_;
};

}  // namespace detail

/// Deterministic search for e with e, D e, ..., D^{d-1} e independent, then
/// Cramer's rule for the monic twisted polynomial annihilating e.
inline TwistedPolynomial cyclic_vector(const std::vector<Matrix>& matrices, std::size_t axis,
                                       const EngineOptions& opt = {}) {
  if (matrices.empty() || matrices[0].empty())
    fail(ErrorKind::domain, "cyclic_vector: zero module basis is degenerate");
  const std::size_t d = matrices[0].size();
  if (d > opt.max_rank)
    fail(ErrorKind::domain, "cyclic_vector: rank " + std::to_string(d) + " exceeds the configured bound");
  const auto& any = matrices[0][0][0];
  const long p = any.prime();
  const std::size_t nvars = any.nvars();
  const Matrix& n = matrices.at(axis);
  detail::CandidateStream stream(p, nvars, d, axis);
  std::size_t tried = 0;
  for (const auto& e : stream.all()) {
    if (tried == opt.max_candidates) break;
    ++tried;
    std::vector<std::vector<LaurentElement>> iterates{e};
    for (std::size_t k = 0; k < d; ++k) iterates.push_back(detail::apply_connection(n, axis, iterates.back()));
    Matrix cols = matrix::zero(p, nvars, d);
    for (std::size_t k = 0; k < d; ++k)
      for (std::size_t row = 0; row < d; ++row) cols[row][k] = iterates[k][row];
    LaurentElement det = matrix::determinant(cols, p, nvars);
    if (det.is_zero()) continue;
    TwistedPolynomial q;
    q.axis = axis;
    q.degree = d;
    q.cyclic_vector = e;
    q.denominator = det;
    q.candidates_tried = tried;
    for (std::size_t k = 0; k < d; ++k) {
      Matrix ck = cols;
      for (std::size_t row = 0; row < d; ++row) ck[row][k] = -iterates[d][row];
      q.numerators.push_back(matrix::determinant(ck, p, nvars));
    }
    return q;
  }
  fail(ErrorKind::domain, "cyclic_vector: search exhausted after " + std::to_string(tried) + " candidates");
}

inline TwistedPolyProfile profile(const TwistedPolynomial& q, const WeightVector& r) {
  TwistedPolyProfile out;
  out.degree = q.degree;
  const PiecewiseAffine den = q.denominator.valuation_line(r);
  for (const auto& num : q.numerators)
    out.coefficients.push_back(num.is_zero() ? PiecewiseAffine::infinite() : num.valuation_line(r) - den);
  out.coefficients.push_back(PiecewiseAffine::line(Rational(0), Rational(0)));
  return out;
}

/// Newton polygon of q at c -> 0+ along weight r.
template <class W>
NewtonPolygon<Germ<W>> germ_polygon(const TwistedPolynomial& q, const std::vector<W>& r) {
  const Germ<W> den = *q.denominator.valuation_germ(r);
  std::vector<std::pair<long, Germ<W>>> pts;
  for (std::size_t k = 0; k < q.numerators.size(); ++k) {
    auto g = q.numerators[k].valuation_germ(r);
    if (g) pts.emplace_back(static_cast<long>(k), *g - den);
  }
  pts.emplace_back(static_cast<long>(q.degree), Germ<W>());
  return lower_hull(std::move(pts));
}

// ---------------------------------------------------------------------------
// Readings

/// Log-scales at one radius, with the masking information.
struct ScaleMultiset {
  std::vector<Rational> values;  // known entries, decreasing
  std::size_t masked = 0;        // entries hidden below `floor`
  Rational floor = 0;
};

/// Per-break data at c -> 0+: the slope in W of each log-scale, plus which
/// axes attain it.
template <class W>
struct BreakGerms {
  std::vector<W> slopes;                          // decreasing
  std::vector<std::vector<std::size_t>> dominant;  // axes attaining each entry
  std::vector<std::size_t> block_of;               // summand index of each entry
  std::size_t masked = 0;
  W floor = W(0);
};

namespace detail {

// Position-wise maximum across axes; an entry is known when the best known
// value is at least every masked floor at that position.
template <class Y>
struct AxisReading {
  std::vector<Y> visible;
  std::size_t masked;
  Y floor;
};

template <class Y>
void combine_axes(const std::vector<AxisReading<Y>>& per_axis, std::size_t d, std::vector<Y>& values,
                  std::vector<std::vector<std::size_t>>& dominant, std::size_t& masked, Y& floor) {
  for (std::size_t pos = 0; pos < d; ++pos) {
    std::optional<Y> best;
    std::optional<Y> worst_floor;
    for (const auto& a : per_axis) {
      if (pos < a.visible.size()) {
        if (!best || a.visible[pos] > *best) best = a.visible[pos];
      } else if (!worst_floor || a.floor > *worst_floor) {
        worst_floor = a.floor;
      }
    }
    if (best && (!worst_floor || *best >= *worst_floor)) {
      std::vector<std::size_t> axes;
      for (std::size_t i = 0; i < per_axis.size(); ++i)
        if (pos < per_axis[i].visible.size() && per_axis[i].visible[pos] == *best) axes.push_back(i);
      values.push_back(*best);
      dominant.push_back(std::move(axes));
    } else {
      ++masked;
      if (worst_floor && *worst_floor > floor) floor = *worst_floor;
    }
  }
}

}  // namespace detail

/// A module with its summands and per-axis twisted polynomials precomputed.
class PreparedModule {
 public:
  explicit PreparedModule(const NablaModule& m, EngineOptions opt = {})
      : p_(m.prime()), nvars_(m.nvars()), rank_(m.rank()), blocks_(decompose(m)) {
    for (const auto& b : blocks_) {
      std::vector<TwistedPolynomial> qs;
      for (std::size_t i = 0; i < nvars_; ++i) qs.push_back(cyclic_vector(b.matrices, i, opt));
      twisted_.push_back(std::move(qs));
    }
  }

  long prime() const { return p_; }
  std::size_t nvars() const { return nvars_; }
  std::size_t rank() const { return rank_; }
  const std::vector<Block>& blocks() const { return blocks_; }
  const TwistedPolynomial& twisted(std::size_t block, std::size_t axis) const {
    return twisted_[block][axis];
  }

  /// Log-scales at the Gauss point with log-radii c * r.
  ScaleMultiset scale_multiset(const WeightVector& r, const Rational& c) const {
    if (c <= 0) fail(ErrorKind::domain, "scale_multiset needs c > 0");
    check_weights(r);
    ScaleMultiset out;
    for (std::size_t b = 0; b < blocks_.size(); ++b) {
      std::vector<detail::AxisReading<Rational>> per_axis;
      for (std::size_t i = 0; i < nvars_; ++i) {
        auto prof = profile(twisted_[b][i], r);
        auto np = lower_hull(prof.points_at(c));
        Rational sp = make_rational(1, p_ - 1) - c * r[i];
        auto rd = scales_from_polygon(np, sp, p_, static_cast<long>(prof.degree));
        per_axis.push_back({rd.visible, rd.masked, rd.floor});
      }
      std::vector<std::vector<std::size_t>> dom;
      Rational floor = out.floor;
      detail::combine_axes(per_axis, blocks_[b].rank(), out.values, dom, out.masked, floor);
      out.floor = floor;
    }
    std::sort(out.values.begin(), out.values.end(), [](const Rational& a, const Rational& b) { return b < a; });
    return out;
  }

  /// Slopes at c -> 0+ of the log-scales, unnormalized. Summands are read
  /// separately, so masking only arises inside explicit blocks.
  template <class W>
  BreakGerms<W> break_germs(const std::vector<W>& r) const {
    check_weights(r);
    struct Entry {
      W slope;
      std::vector<std::size_t> axes;
      std::size_t block;
    };
    std::vector<Entry> entries;
    BreakGerms<W> out;
    for (std::size_t b = 0; b < blocks_.size(); ++b) {
      if (blocks_[b].dwork) check_dwork_support(*blocks_[b].dwork, r);
      std::vector<detail::AxisReading<Germ<W>>> per_axis;
      for (std::size_t i = 0; i < nvars_; ++i) {
        auto np = germ_polygon(twisted_[b][i], r);
        Germ<W> sp(make_rational(1, p_ - 1), W(-r[i]));
        auto rd = scales_from_polygon(np, sp, p_, static_cast<long>(twisted_[b][i].degree));
        if (!rd.visible.empty() && rd.visible.front().value > 0)
          fail(ErrorKind::unsupported,
               blocks_[b].dwork
                   ? "log-scale does not tend to 0 as c -> 0+: module is not solvable at this boundary"
                   : "log-scale does not tend to 0 as c -> 0+: explicit block of rank " +
                         std::to_string(blocks_[b].rank()) +
                         " is not solvable here or its cyclic vector has an apparent singularity");
        per_axis.push_back({rd.visible, rd.masked, rd.floor});
      }
      std::vector<Germ<W>> values;
      std::vector<std::vector<std::size_t>> dom;
      std::size_t masked = 0;
      Germ<W> floor;
      detail::combine_axes(per_axis, blocks_[b].rank(), values, dom, masked, floor);
      for (std::size_t k = 0; k < values.size(); ++k) entries.push_back({values[k].slope, dom[k], b});
      out.masked += masked;
      if (floor.slope > out.floor) out.floor = floor.slope;
    }
    std::stable_sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) { return b.slope < a.slope; });
    for (auto& e : entries) {
      out.slopes.push_back(e.slope);
      out.dominant.push_back(e.axes);
      out.block_of.push_back(e.block);
    }
    return out;
  }

 private:
  template <class W>
  void check_weights(const std::vector<W>& r) const {
    if (r.size() != nvars_) fail(ErrorKind::domain, "weight vector length does not match nvars");
  }

  long p_;
  std::size_t nvars_;
  std::size_t rank_;
  std::vector<Block> blocks_;
  std::vector<std::vector<TwistedPolynomial>> twisted_;
};

inline ScaleMultiset scale_multiset(const NablaModule& m, const WeightVector& r, const Rational& c) {
  return PreparedModule(m).scale_multiset(r, c);
}

/// Log-scale lower bounds from iterating D_i: with G_n the matrix of D_i^n,
///   est_n = max(0, (v_p(n!) - v_{c r}(G_n)) / n - c r_i),
/// whose limsup is the log-scale along axis i.
inline std::vector<Rational> spectral_estimate(const NablaModule& m, std::size_t axis, const WeightVector& r,
                                               const Rational& c, long nmax) {
  if (nmax < 1) fail(ErrorKind::domain, "spectral_estimate needs nmax >= 1");
  WeightVector cr;
  for (const auto& x : r) cr.push_back(c * x);
  const long p = m.prime();
  const Matrix& n = m.matrices().at(axis);
  Matrix g = matrix::identity(p, m.nvars(), m.rank());
  std::vector<Rational> out;
  for (long k = 1; k <= nmax; ++k) {
    g = matrix::add(matrix::derive(g, axis), matrix::mul(n, g));
    Valuation gamma;
    for (const auto& row : g)
      for (const auto& x : row) {
        Valuation v = x.gauss_valuation(cr);
        if (v < gamma) gamma = v;
      }
    if (gamma.is_infinite()) {
      out.push_back(0);
      continue;
    }
    Rational est = (Rational(factorial_valuation(k, p)) - gamma.value()) / Rational(k) - c * r[axis];
    out.push_back(est > 0 ? est : Rational(0));
  }
  return out;
}

}  // namespace swanlab
