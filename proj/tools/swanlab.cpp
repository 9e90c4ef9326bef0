// swanlab: break multisets, simplex sweeps and surface checks for
// Dwork-type differential modules.

#include <swanlab/acceptance.hpp>
#include <swanlab/serialize.hpp>
#include <swanlab/zoo.hpp>

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace {

using namespace swanlab;

int exit_code(ErrorKind k) {
  switch (k) {
    case ErrorKind::usage: return 1;
    case ErrorKind::parse: return 2;
    case ErrorKind::unsupported: return 3;
    case ErrorKind::invariant: return 4;
    case ErrorKind::domain: return 1;
  }
  return 1;
}

struct Source {
  std::string input;  // file path or zoo entry name
  std::string zoo_path;
};

struct Loaded {
  ModuleSpecDoc doc;
  std::string label;
};

Loaded load(const Source& s) {
  if (s.input.empty()) fail(ErrorKind::usage, "no module given (a file path or a zoo entry name)");
  std::filesystem::path p(s.input);
  if (std::filesystem::is_regular_file(p)) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return {parse_spec(ss.str(), p.parent_path().empty() ? "." : p.parent_path()), p.stem().string()};
  }
  Zoo zoo = load_zoo(s.zoo_path.empty() ? default_manifest_path() : s.zoo_path);
  if (const ZooEntry* e = zoo.find(s.input)) return {e->doc, e->name};
  fail(ErrorKind::usage, "'" + s.input + "' is neither a file nor a zoo entry");
}

Normalization parse_normalization(const std::string& name, const ModuleSpecDoc& doc) {
  if (name == "natural") return Normalization::natural();
  if (name == "sum") return Normalization::sum();
  for (std::size_t i = 0; i < doc.vars.size(); ++i)
    if (doc.vars[i] == name) return Normalization::by_variable(i);
  fail(ErrorKind::usage, "unknown normalization '" + name + "' (natural, sum, or a variable name)");
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) fail(ErrorKind::usage, "cannot write " + path);
  out << text;
}

int cmd_breaks(const Source& src, const std::string& weights_flag, const std::string& norm_flag, bool json) {
  Loaded l = load(src);
  std::string w = !weights_flag.empty() ? weights_flag : l.doc.param("weights").value_or("");
  if (w.empty()) fail(ErrorKind::usage, "no weights (pass --weights or set weights = ... in the document)");
  WeightVector r = parse_rational_list(w);
  if (r.size() != l.doc.vars.size()) fail(ErrorKind::usage, "weights do not match the number of variables");
  std::string nn = !norm_flag.empty() ? norm_flag : l.doc.param("normalize").value_or("natural");
  BreakData b = break_multiset(build_module(l.doc), r, parse_normalization(nn, l.doc));
  if (json) {
    std::cout << to_json(b, l.doc.vars).dump(2) << "\n";
    return 0;
  }
  std::cout << "weights: " << to_string(r) << "\n";
  std::cout << "normalization: " << b.normalization.str(l.doc.vars) << " (divisor " << to_string(b.divisor) << ")\n";
  std::cout << "breaks: " << to_string(b.breaks) << "\n";
  std::cout << "swan: " << to_string(b.swan) << "\n";
  return 0;
}

int cmd_sweep(const Source& src, long grid_flag, const std::string& out) {
  Loaded l = load(src);
  long N = grid_flag > 0 ? grid_flag : std::stol(l.doc.param("grid").value_or("12"));
  BreakSurface s = sweep_simplex(build_module(l.doc), N);
  Json doc = to_json(s);
  if (out.empty()) {
    std::cout << to_csv(s) << doc.dump(2) << "\n";
  } else {
    write_file(out + ".csv", to_csv(s));
    write_file(out + ".json", doc.dump(2) + "\n");
    std::cout << "wrote " << out << ".csv and " << out << ".json\n";
  }
  for (const auto& f : s.functions) {
    std::cout << f.name << ": " << (f.passes() ? "convex, integral polyhedral" : "FAILED");
    if (f.fit) {
      std::cout << "; pieces";
      for (const auto& p : f.fit->pieces()) std::cout << " {" << p.str() << "}";
    }
    std::cout << "\n";
  }
  return s.passes() ? 0 : 4;
}

int cmd_surface(const Source& src, const std::string& ambient, const std::string& divisor, bool json) {
  Loaded l = load(src);
  SurfaceModel m = surface_model_from(l.doc, l.label, ambient, divisor);
  SurfaceReport rep = analyze_surface(m);
  SwanDivisorReport sd = swan_divisor_check(m);
  if (json) {
    Json j;
    j["surface"] = to_json(rep);
    j["swan_divisor"] = to_json(sd, m.ambient);
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << "ambient " << m.ambient.name << ", Z = " << m.ambient.ray_names[m.z_ray] << ", p = " << m.prime()
              << "\n";
    std::cout << "l = " << rep.ell.ell << ", Swan(E, Z) = " << to_string(rep.swan_z) << "\n";
    for (const auto& pt : rep.points) {
      std::cout << "  " << pt.label << ": Swan' = " << to_string(pt.swan_slope());
      if (pt.crossing) std::cout << " [crossing]";
      if (pt.special) std::cout << " [special]";
      if (pt.exposed) std::cout << " [exposed turning point]";
      std::cout << "\n";
    }
    std::cout << "sum(Swan' + l) = " << to_string(rep.lhs) << ", (2-2g) l - Z^2 Swan = " << to_string(rep.rhs)
              << (rep.subharmonic() ? " [ok]" : " [VIOLATED]") << "\n";
    std::cout << "monotonicity " << (rep.monotone ? "holds" : "VIOLATED") << ", exposed turning points "
              << rep.exposed << "\n";
    for (const auto& c : sd.components)
      std::cout << "Z = " << m.ambient.ray_names[c.ray] << ": Z.(Swan + l(K+D)) = " << to_string(c.intersection)
                << " vs pointwise " << to_string(c.bookkeeping) << (c.lemma_holds() ? " [ok]" : " [VIOLATED]")
                << "\n";
  }
  return rep.subharmonic() && rep.monotone && sd.passes() ? 0 : 4;
}

int cmd_turning(const Source& src, const std::string& ambient, const std::string& crossing, long grid, bool json) {
  Loaded l = load(src);
  std::string c = !crossing.empty() ? crossing : l.doc.param("crossing").value_or("");
  auto names = split_names(c);
  if (names.size() != 2) fail(ErrorKind::usage, "--crossing needs two divisor names, e.g. x:0,t:0");
  SurfaceModel m = surface_model_from(l.doc, l.label, ambient, names[0]);
  TurningScan s = hidden_turning_scan(m, m.ambient.find(names[0]), m.ambient.find(names[1]), grid);
  Json j = to_json(s, m.ambient);
  if (json) {
    std::cout << j.dump(2) << "\n";
  } else {
    for (const auto& f : j["functions"]) {
      std::cout << "f_" << f["i"].get<std::size_t>() << ": " << (f["affine"].get<bool>() ? "affine" : "not affine")
                << ", f'(0) = " << f["right_slope_at_0"].get<std::string>()
                << ", f(1) - f(0) = " << f["endpoint_difference"].get<std::string>() << ", kinks at";
      for (const auto& k : f["kinks"]) std::cout << " " << k.get<std::string>();
      std::cout << "\n";
    }
    std::cout << (s.hidden() ? "hidden turning point" : "no hidden turning point") << "; slope test "
              << (s.slope_test_ok() ? "holds" : "FAILS") << "\n";
  }
  return s.slope_test_ok() ? 0 : 4;
}

int cmd_zoo(const std::string& zoo_path, bool json) {
  Zoo z = load_zoo(zoo_path.empty() ? default_manifest_path() : zoo_path);
  if (json) {
    Json arr = Json::array();
    for (const auto& e : z.entries)
      arr.push_back({{"section", e.section}, {"name", e.name}, {"doc", e.doc_text}, {"expected", e.expected},
                     {"origin", e.origin}});
    std::cout << arr.dump(2) << "\n";
    return 0;
  }
  for (const auto& e : z.entries) {
    std::cout << e.section << "/" << e.name << "  expected " << e.expected.dump() << "  [" << e.origin << "]\n";
  }
  return 0;
}

int cmd_selftest(const std::string& zoo_path) {
  Zoo z = load_zoo(zoo_path.empty() ? default_manifest_path() : zoo_path);
  bool ok = true;
  for (const auto& r : run_acceptance(z)) {
    std::cout << r.line() << "\n";
    ok = ok && r.pass;
  }
  return ok ? 0 : 4;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Differential Swan conductors of Dwork-type modules"};
  app.require_subcommand(1);
  Source src;
  std::string weights, norm, ambient, divisor, crossing, out;
  long grid = 0;
  bool json = false;

  auto add_source = [&](CLI::App* c) {
    c->add_option("module", src.input, "module file or zoo entry name");
    c->add_option("--zoo", src.zoo_path, "zoo manifest path");
  };
  auto* breaks = app.add_subcommand("breaks", "break multiset at one weight");
  add_source(breaks);
  breaks->add_option("--weights", weights, "comma-separated rational weights");
  breaks->add_option("--normalize-by", norm, "natural | sum | variable name");
  breaks->add_flag("--json", json);

  auto* sweep = app.add_subcommand("sweep", "partial break sums over the simplex grid");
  add_source(sweep);
  sweep->add_option("--grid", grid, "grid resolution N");
  sweep->add_option("--out", out, "output prefix for .csv and .json");

  auto* surface = app.add_subcommand("surface-check", "subharmonicity and monotonicity along a divisor");
  add_source(surface);
  surface->add_option("--ambient", ambient, "P1xP1 | P2");
  surface->add_option("--divisor", divisor, "boundary divisor, e.g. t:0");
  surface->add_flag("--json", json);

  auto* turning = app.add_subcommand("turning-scan", "B_i along the edge at a crossing");
  add_source(turning);
  long scan_grid = 12;
  turning->add_option("--ambient", ambient, "P1xP1 | P2");
  turning->add_option("--crossing", crossing, "two divisors, e.g. x:0,t:0");
  turning->add_option("--grid", scan_grid, "grid resolution");
  turning->add_flag("--json", json);

  auto* zoo = app.add_subcommand("zoo", "list built-in examples");
  zoo->add_option("--zoo", src.zoo_path, "zoo manifest path");
  zoo->add_flag("--json", json);

  auto* selftest = app.add_subcommand("selftest", "run the acceptance suite");
  selftest->add_option("--zoo", src.zoo_path, "zoo manifest path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  try {
    if (breaks->parsed()) return cmd_breaks(src, weights, norm, json);
    if (sweep->parsed()) return cmd_sweep(src, grid, out);
    if (surface->parsed()) return cmd_surface(src, ambient, divisor, json);
    if (turning->parsed()) return cmd_turning(src, ambient, crossing, scan_grid, json);
    if (zoo->parsed()) return cmd_zoo(src.zoo_path, json);
    if (selftest->parsed()) return cmd_selftest(src.zoo_path);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
