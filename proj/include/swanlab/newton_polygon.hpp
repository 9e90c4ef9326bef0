#pragma once

// Lower convex hulls of (integer, value) points and the slope -> scale
// reading used on twisted polynomials.
//
// Everything here is templated on the ordinate type Y, which only needs
// subtraction, division by a rational, and a total order. Y = Rational gives
// ordinary polygons; Y = Germ<W> gives the polygon "at c -> 0+".

#include <swanlab/germ.hpp>
#include <swanlab/rational.hpp>

#include <algorithm>
#include <string>
#include <utility>
#include <vector>

namespace swanlab {

template <class Y>
struct Segment {
  Y slope;
  long length;
};

template <class Y>
class NewtonPolygon {
 public:
  using Vertex = std::pair<long, Y>;

  NewtonPolygon() = default;
  explicit NewtonPolygon(std::vector<Vertex> vertices) : vertices_(std::move(vertices)) {}

  const std::vector<Vertex>& vertices() const { return vertices_; }

  long first_x() const { return vertices_.front().first; }
  long last_x() const { return vertices_.back().first; }
  long width() const { return vertices_.empty() ? 0 : last_x() - first_x(); }

  std::vector<Segment<Y>> segments() const {
    std::vector<Segment<Y>> out;
    for (std::size_t k = 1; k < vertices_.size(); ++k) {
      const long dx = vertices_[k].first - vertices_[k - 1].first;
      out.push_back({Y((vertices_[k].second - vertices_[k - 1].second) / Rational(dx)), dx});
    }
    return out;
  }

  /// Segment slopes repeated by horizontal length, increasing.
  std::vector<Y> slopes() const {
    std::vector<Y> out;
    for (const auto& s : segments())
      for (long m = 0; m < s.length; ++m) out.push_back(s.slope);
    return out;
  }

  friend bool operator==(const NewtonPolygon& a, const NewtonPolygon& b) {
    return a.vertices_ == b.vertices_;
  }

 private:
  std::vector<Vertex> vertices_;
};

/// Lower convex hull. Points must have distinct x; at least one point.
template <class Y>
NewtonPolygon<Y> lower_hull(std::vector<std::pair<long, Y>> points) {
  if (points.empty()) fail(ErrorKind::domain, "lower_hull of an empty point set");
  std::sort(points.begin(), points.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  for (std::size_t k = 1; k < points.size(); ++k)
    if (points[k].first == points[k - 1].first)
      fail(ErrorKind::domain, "lower_hull: duplicate x-coordinate " + std::to_string(points[k].first));
  auto slope = [](const auto& a, const auto& b) {
    return Y((b.second - a.second) / Rational(b.first - a.first));
  };
  std::vector<std::pair<long, Y>> hull;
  for (auto& pt : points) {
    while (hull.size() >= 2 && slope(hull[hull.size() - 2], hull.back()) >= slope(hull.back(), pt))
      hull.pop_back();
    hull.push_back(pt);
  }
  return NewtonPolygon<Y>(std::move(hull));
}

/// Log-scales read off a monic twisted polynomial's polygon.
template <class Y>
struct ScaleReading {
  std::vector<Y> visible;  // decreasing
  std::size_t masked = 0;  // entries below the floor, values unreliable
  Y floor;                 // s_max / p
};

/// Converts each root valuation w (negated slope; +inf for the zero roots
/// left of the first vertex) to a log-scale max(0, sp_val - w), keeps the
/// entries at or above s_max / p, and reports that floor.
template <class Y>
ScaleReading<Y> scales_from_polygon(const NewtonPolygon<Y>& np, const Y& sp_val, long p, long degree) {
  const Y zero = Y();
  if (np.vertices().empty() || np.last_x() != degree || np.vertices().back().second != zero)
    fail(ErrorKind::domain, "scales_from_polygon: profile is not monic of degree " + std::to_string(degree));
  std::vector<Y> all(static_cast<std::size_t>(np.first_x()), zero);
  for (const auto& s : np.slopes()) {
    Y w = -s;
    Y candidate = Y(sp_val - w);
    all.push_back(candidate > zero ? candidate : zero);
  }
  std::sort(all.begin(), all.end(), [](const Y& a, const Y& b) { return b < a; });
  ScaleReading<Y> out;
  out.floor = all.empty() ? zero : Y(all.front() / Rational(p));
  for (const auto& s : all) {
    if (s >= out.floor)
      out.visible.push_back(s);
    else
      ++out.masked;
  }
  return out;
}

/// Splits off the least k slopes. k must land on a vertex.
template <class Y>
std::pair<NewtonPolygon<Y>, NewtonPolygon<Y>> split_by_slope(const NewtonPolygon<Y>& np, long k) {
  if (k <= 0 || k >= np.width())
    fail(ErrorKind::domain, "split_by_slope: k must satisfy 0 < k < degree");
  const long x = np.first_x() + k;
  const auto& v = np.vertices();
  auto it = std::find_if(v.begin(), v.end(), [&](const auto& pt) { return pt.first == x; });
  if (it == v.end())
    fail(ErrorKind::domain, "split_by_slope: k = " + std::to_string(k) + " is interior to a segment");
  std::vector<std::pair<long, Y>> left(v.begin(), it + 1), right(it, v.end());
  return {NewtonPolygon<Y>(std::move(left)), NewtonPolygon<Y>(std::move(right))};
}

/// Vertex list as "x,num/den" records joined by ';'.
inline std::string to_string(const NewtonPolygon<Rational>& np) {
  std::string out;
  for (const auto& [x, y] : np.vertices()) {
    if (!out.empty()) out += ";";
    out += std::to_string(x) + "," + to_string(y);
  }
  return out;
}

}  // namespace swanlab
