#pragma once

// The built-in example collection (zoo/manifest.json).

#include <swanlab/spec_doc.hpp>
#include <swanlab/surface_variation.hpp>

#include <json.hpp>

#include <fstream>
#include <string>
#include <vector>

#ifndef SWANLAB_ZOO_MANIFEST
#define SWANLAB_ZOO_MANIFEST "zoo/manifest.json"
#endif

namespace swanlab {

struct ZooEntry {
  std::string section;  // modules | surfaces | crossings
  std::string name;
  std::string doc_text;
  nlohmann::ordered_json expected;
  std::string origin;
  ModuleSpecDoc doc;
};

struct Zoo {
  std::vector<ZooEntry> entries;

  std::vector<const ZooEntry*> section(const std::string& s) const {
    std::vector<const ZooEntry*> out;
    for (const auto& e : entries)
      if (e.section == s) out.push_back(&e);
    return out;
  }
  const ZooEntry* find(const std::string& name) const {
    for (const auto& e : entries)
      if (e.name == name) return &e;
    return nullptr;
  }
};

inline std::string default_manifest_path() {
  if (const char* env = std::getenv("SWANLAB_ZOO")) return env;
  return SWANLAB_ZOO_MANIFEST;
}

inline Zoo load_zoo(const std::string& path = default_manifest_path()) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::usage, "cannot open zoo manifest " + path);
  nlohmann::ordered_json j;
  try {
    j = nlohmann::ordered_json::parse(in);
  } catch (const std::exception& e) {
    fail(ErrorKind::parse, "zoo manifest: " + std::string(e.what()));
  }
  Zoo z;
  for (const char* sec : {"modules", "surfaces", "crossings"}) {
    if (!j.contains(sec)) continue;
    for (const auto& e : j[sec]) {
      ZooEntry ze;
      ze.section = sec;
      ze.name = e.at("name").get<std::string>();
      ze.doc_text = e.at("doc").get<std::string>();
      ze.expected = e.value("expected", nlohmann::ordered_json::object());
      ze.origin = e.value("origin", "");
      try {
        ze.doc = parse_spec(ze.doc_text);
      } catch (const Error& err) {
        throw Error(err.kind(), "zoo entry " + ze.name + ": " + err.what());
      }
      z.entries.push_back(std::move(ze));
    }
  }
  return z;
}

inline std::vector<std::string> split_names(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : s + ",") {
    if (ch == ',') {
      auto b = cur.find_first_not_of(" \t"), e = cur.find_last_not_of(" \t");
      if (b != std::string::npos) out.push_back(cur.substr(b, e - b + 1));
      cur.clear();
    } else {
      cur += ch;
    }
  }
  return out;
}

/// A surface model from a document with `ambient` and `divisor` (or the
/// first ray of `crossing`) parameters; flags override them when nonempty.
inline SurfaceModel surface_model_from(const ModuleSpecDoc& doc, const std::string& label,
                                       const std::string& ambient_flag = "", const std::string& divisor_flag = "") {
  std::string amb = !ambient_flag.empty() ? ambient_flag : doc.param("ambient").value_or("P1xP1");
  std::string div = divisor_flag;
  if (div.empty()) div = doc.param("divisor").value_or("");
  if (div.empty()) {
    auto names = split_names(doc.param("crossing").value_or(""));
    div = names.empty() ? "t:0" : names.front();
  }
  Ambient a = ambient_by_name(amb);
  return make_surface_model(a, a.find(div), build_module(doc), label);
}

}  // namespace swanlab
