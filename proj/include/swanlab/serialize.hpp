#pragma once

// JSON documents for results. Every number is an exact "num/den" string.

#include <swanlab/break_variation.hpp>
#include <swanlab/surface_variation.hpp>

#include <json.hpp>

#include <string>
#include <vector>

namespace swanlab {

using Json = nlohmann::ordered_json;

inline Json rationals_json(const std::vector<Rational>& v) {
  Json a = Json::array();
  for (const auto& q : v) a.push_back(to_string(q));
  return a;
}

inline Json to_json(const BreakData& b, const std::vector<std::string>& names = {}) {
  Json j;
  j["weights"] = rationals_json(b.r);
  j["normalization"] = b.normalization.str(names);
  j["normalizer"] = to_string(b.divisor);
  j["breaks"] = rationals_json(b.breaks);
  j["swan"] = to_string(b.swan);
  Json dom = Json::array();
  for (const auto& axes : b.dominant) {
    Json a = Json::array();
    for (auto i : axes) a.push_back(i < names.size() ? names[i] : std::to_string(i));
    dom.push_back(a);
  }
  j["dominant_axes"] = dom;
  return j;
}

inline Json to_json(const PolyhedralFunction& f) {
  Json j;
  Json pieces = Json::array();
  for (const auto& p : f.pieces()) pieces.push_back(p.str());
  Json region = Json::array();
  for (const auto& c : f.region()) region.push_back(c.str());
  j["pieces"] = pieces;
  j["region"] = region;
  j["integral"] = f.all_integral();
  j["transintegral"] = f.all_transintegral();
  return j;
}

inline Json to_json(const SurfaceFunction& f) {
  Json j;
  j["name"] = f.name;
  j["convex"] = f.convex.ok;
  if (!f.convex.ok) j["convex_witness"] = f.convex.witness;
  j["integral_values"] = f.integral.ok;
  if (!f.integral.ok) j["integral_witness"] = f.integral.witness;
  if (f.fit) {
    j["fit"] = to_json(*f.fit);
    Json loci = Json::array();
    for (const auto& l : f.loci) loci.push_back(l.str());
    j["breakpoint_loci"] = loci;
  } else {
    j["fit_error"] = f.fit_error;
  }
  return j;
}

inline Json to_json(const BreakSurface& s) {
  Json j;
  j["nvars"] = s.n;
  j["rank"] = s.rank;
  j["grid"] = s.N;
  j["points"] = s.table.size();
  Json ex = Json::array();
  for (const auto& e : s.excluded) ex.push_back({{"r", rationals_json(e.r)}, {"reason", e.reason}});
  j["excluded"] = ex;
  Json fs = Json::array();
  for (const auto& f : s.functions) fs.push_back(to_json(f));
  j["functions"] = fs;
  j["resolution_note"] = "polyhedrality is certified at grid resolution " + std::to_string(s.N);
  j["passes"] = s.passes();
  return j;
}

inline Json to_json(const PointReport& p) {
  Json j;
  j["point"] = p.label;
  Json br = Json::array();
  for (const auto& b : p.breaks) br.push_back({{"intercept", to_string(b.constant)}, {"slope", to_string(b.rho)}});
  j["breaks"] = br;
  j["swan_slope"] = to_string(p.swan_slope());
  j["crossing"] = p.crossing;
  j["special"] = p.special;
  j["exposed_turning_point"] = p.exposed;
  Json mono = Json::array();
  for (const auto& [i, v] : p.monotonicity) mono.push_back({{"i", i}, {"value", to_string(v)}});
  j["monotonicity"] = mono;
  return j;
}

inline Json to_json(const SurfaceReport& r) {
  Json j;
  j["ell"] = r.ell.ell;
  Json li = Json::array();
  for (const auto& [i, v] : r.ell.ell_i) li.push_back({{"i", i}, {"ell_i", v}});
  j["ell_i"] = li;
  j["generic_breaks"] = rationals_json(r.ell.generic_breaks);
  j["swan_along_Z"] = to_string(r.swan_z);
  j["lhs"] = to_string(r.lhs);
  j["rhs"] = to_string(r.rhs);
  j["subharmonic"] = r.subharmonic();
  j["equality"] = r.equality();
  j["generic_law"] = r.generic_law;
  j["monotone"] = r.monotone;
  j["generic_equality"] = r.generic_equality;
  j["exposed_turning_points"] = r.exposed;
  Json pts = Json::array();
  for (const auto& p : r.points) pts.push_back(to_json(p));
  j["points"] = pts;
  return j;
}

/// Interior grid parameters s = k/N where f_i has a nonzero second difference.
inline Json kinks(const TurningScan& t, std::size_t i) {
  Json out = Json::array();
  const auto& v = t.f[i];
  for (std::size_t k = 1; k + 1 < v.size(); ++k)
    if (v[k - 1] + v[k + 1] != 2 * v[k]) out.push_back(to_string(make_rational(static_cast<long>(k), t.N)));
  return out;
}

inline Json to_json(const TurningScan& t, const Ambient& a) {
  Json j;
  j["crossing"] = {a.ray_names[t.first_ray], a.ray_names[t.second_ray]};
  j["grid"] = t.N;
  Json fs = Json::array();
  for (std::size_t i = 0; i < t.f.size(); ++i) {
    Json fi;
    fi["i"] = i + 1;
    fi["values"] = rationals_json(t.f[i]);
    fi["right_slope_at_0"] = to_string(t.right_slope_at_0[i]);
    fi["endpoint_difference"] = to_string(t.f[i].back() - t.f[i].front());
    fi["affine"] = static_cast<bool>(t.affine[i]);
    fi["slope_test"] = static_cast<bool>(t.slope_test[i]);
    fi["kinks"] = kinks(t, i);
    fs.push_back(fi);
  }
  j["functions"] = fs;
  j["hidden_turning_point"] = t.hidden();
  return j;
}

inline Json to_json(const SwanDivisorReport& r, const Ambient& a) {
  Json j;
  Json sd = Json::object();
  for (std::size_t i = 0; i < a.size(); ++i)
    if (r.in_d[i]) sd[a.ray_names[i]] = to_string(r.swan_divisor[i]);
  j["swan_divisor"] = sd;
  Json cs = Json::array();
  for (const auto& c : r.components)
    cs.push_back({{"component", a.ray_names[c.ray]},
                  {"swan", to_string(c.swan)},
                  {"ell", c.ell},
                  {"intersection", to_string(c.intersection)},
                  {"pointwise_bound", to_string(c.bookkeeping)},
                  {"turning_points", c.turning_points},
                  {"nonnegative", c.nonnegative()},
                  {"lemma_holds", c.lemma_holds()}});
  j["components"] = cs;
  j["passes"] = r.passes();
  return j;
}

}  // namespace swanlab
