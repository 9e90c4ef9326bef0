#pragma once

// Continuous piecewise-affine functions of a parameter c >= 0 with exact
// rational breakpoints.

#include <swanlab/rational.hpp>

#include <algorithm>
#include <string>
#include <vector>

namespace swanlab {

struct AffinePiece {
  Rational start;  // piece is valid on [start, next start)
  Rational slope;
  Rational intercept;

  Rational at(const Rational& c) const { return intercept + slope * c; }
  friend bool operator==(const AffinePiece&, const AffinePiece&) = default;
};

class PiecewiseAffine {
 public:
  /// The constant +infinity (valuation of zero).
  static PiecewiseAffine infinite() {
    PiecewiseAffine f;
    f.infinite_ = true;
    return f;
  }

  static PiecewiseAffine line(Rational intercept, Rational slope) {
    PiecewiseAffine f;
    f.pieces_.push_back({Rational(0), std::move(slope), std::move(intercept)});
    return f;
  }

  /// Pointwise minimum over c >= 0 of the lines a_k + s_k c.
  static PiecewiseAffine lower_envelope(const std::vector<std::pair<Rational, Rational>>& lines) {
    if (lines.empty()) return infinite();
    // start: least intercept, ties broken by least slope
    std::size_t cur = 0;
    for (std::size_t k = 1; k < lines.size(); ++k) {
      const auto& [a, s] = lines[k];
      const auto& [ac, sc] = lines[cur];
      if (a < ac || (a == ac && s < sc)) cur = k;
    }
    PiecewiseAffine f;
    Rational at = 0;
    for (;;) {
      f.pieces_.push_back({at, lines[cur].second, lines[cur].first});
      // next line to take over: smallest crossing point beyond `at`
      std::size_t next = lines.size();
      Rational best_c;
      for (std::size_t k = 0; k < lines.size(); ++k) {
        if (lines[k].second >= lines[cur].second) continue;
        Rational c = (lines[k].first - lines[cur].first) / (lines[cur].second - lines[k].second);
        if (c < at) continue;
        if (next == lines.size() || c < best_c ||
            (c == best_c && lines[k].second < lines[next].second)) {
          next = k;
          best_c = c;
        }
      }
      if (next == lines.size()) break;
      if (best_c == at) {
        f.pieces_.pop_back();
      }
      at = best_c;
      cur = next;
    }
    f.simplify();
    return f;
  }

  bool is_infinite() const { return infinite_; }
  const std::vector<AffinePiece>& pieces() const { return pieces_; }

  /// Interior breakpoints, increasing.
  std::vector<Rational> breakpoints() const {
    std::vector<Rational> b;
    for (std::size_t i = 1; i < pieces_.size(); ++i) b.push_back(pieces_[i].start);
    return b;
  }

  const AffinePiece& piece_at(const Rational& c) const {
    if (infinite_) fail(ErrorKind::domain, "piece_at on an infinite function");
    if (c < 0) fail(ErrorKind::domain, "PiecewiseAffine evaluated at negative c");
    std::size_t k = 0;
    while (k + 1 < pieces_.size() && pieces_[k + 1].start <= c) ++k;
    return pieces_[k];
  }

  Rational operator()(const Rational& c) const { return piece_at(c).at(c); }

  /// The piece adjacent to c = 0.
  const AffinePiece& first_piece() const { return piece_at(Rational(0)); }

  friend PiecewiseAffine operator+(const PiecewiseAffine& f, const PiecewiseAffine& g) {
    return combine(f, g, 1);
  }
  friend PiecewiseAffine operator-(const PiecewiseAffine& f, const PiecewiseAffine& g) {
    if (g.infinite_) fail(ErrorKind::domain, "subtracting an infinite function");
    return combine(f, g, -1);
  }
  friend bool operator==(const PiecewiseAffine& a, const PiecewiseAffine& b) {
    return a.infinite_ == b.infinite_ && a.pieces_ == b.pieces_;
  }

  std::string str() const {
    if (infinite_) return "inf";
    std::string out;
    for (const auto& p : pieces_) {
      if (!out.empty()) out += "; ";
      out += "[" + to_string(p.start) + ",) " + to_string(p.slope) + "*c + " + to_string(p.intercept);
    }
    return out;
  }

 private:
  static PiecewiseAffine combine(const PiecewiseAffine& f, const PiecewiseAffine& g, int sign) {
    if (f.infinite_ || g.infinite_) return infinite();
    std::vector<Rational> starts;
    for (const auto& p : f.pieces_) starts.push_back(p.start);
    for (const auto& p : g.pieces_) starts.push_back(p.start);
    std::sort(starts.begin(), starts.end());
    starts.erase(std::unique(starts.begin(), starts.end()), starts.end());
    PiecewiseAffine h;
    for (const auto& s : starts) {
      const auto& a = f.piece_at(s);
      const auto& b = g.piece_at(s);
      h.pieces_.push_back({s, a.slope + sign * b.slope, a.intercept + sign * b.intercept});
    }
    h.simplify();
    return h;
  }

  void simplify() {
    std::vector<AffinePiece> out;
    for (auto& p : pieces_) {
      if (!out.empty() && out.back().slope == p.slope && out.back().intercept == p.intercept) continue;
      out.push_back(p);
    }
    pieces_ = std::move(out);
  }

  bool infinite_ = false;
  std::vector<AffinePiece> pieces_;
};

}  // namespace swanlab
