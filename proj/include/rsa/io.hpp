// Copyright 2026 The rsa-restore Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// JSON readers and writers for instances, useful-triple sets and solutions.
//
// Instance schema:
//   { "slot_count": C,
//     "nodes": ["n1", ...],                       (strings or integers)
//     "links": [{"id": 1, "u": "n1", "v": "n2", "length_km": 300.0,
//                "colors": [1, 2, [5, 9]]}, ...], (omitted: all free)
//     "demands": [{"id": 1, "s": "n1", "t": "n7", "width": 2,
//                  "reach_km": 2500.0}, ...],
//     "meta": {...} }                              (optional, passed through)
//
// Errors carry the JSON pointer of the offending value.

#pragma once

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "rsa/extract.hpp"
#include "rsa/network.hpp"
#include "rsa/trimming.hpp"

namespace rsa {

using Json = nlohmann::json;
using OrderedJson = nlohmann::ordered_json;

struct InstanceFile {
  RestorationInstance instance;
  Json meta = Json::object();
};

namespace detail {

[[noreturn]] inline void fail(const std::string& pointer, const std::string& what) {
  throw InputError((pointer.empty() ? std::string("/") : pointer) + ": " + what);
}

inline const Json& member(const Json& obj, const std::string& ptr, const char* key) {
  if (!obj.is_object()) fail(ptr, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) fail(ptr + "/" + key, "missing");
  return *it;
}

inline std::uint64_t naturalAt(const Json& v, const std::string& ptr) {
  if (v.is_number_unsigned()) return v.get<std::uint64_t>();
  if (v.is_number_integer() && v.get<std::int64_t>() >= 0) return static_cast<std::uint64_t>(v.get<std::int64_t>());
  fail(ptr, "expected a non-negative integer");
}

inline int positiveIntAt(const Json& v, const std::string& ptr) {
  const std::uint64_t n = naturalAt(v, ptr);
  if (n == 0 || n > 1'000'000) fail(ptr, "expected a positive integer");
  return static_cast<int>(n);
}

inline Length kmAt(const Json& v, const std::string& ptr) {
  if (!v.is_number()) fail(ptr, "expected a number (km)");
  try {
    return Length::fromKm(v.get<double>());
  } catch (const InputError& e) {
    fail(ptr, e.what());
  }
}

inline std::string nodeLabel(const Json& v, const std::string& ptr) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer()) return std::to_string(v.get<std::int64_t>());
  fail(ptr, "expected a node label (string or integer)");
}

inline NodeIndex nodeRef(const std::map<std::string, NodeIndex>& idx, const Json& v,
                         const std::string& ptr) {
  const std::string label = nodeLabel(v, ptr);
  auto it = idx.find(label);
  if (it == idx.end()) fail(ptr, "unknown node '" + label + "'");
  return it->second;
}

inline ColorSet colorsAt(const Json& v, int slots, const std::string& ptr) {
  if (!v.is_array()) fail(ptr, "expected an array of colors or [first, last] ranges");
  ColorSet set(slots);
  for (std::size_t i = 0; i < v.size(); ++i) {
    const std::string p = ptr + "/" + std::to_string(i);
    auto add = [&](const Json& c, const std::string& cp) {
      const std::uint64_t col = naturalAt(c, cp);
      if (col < 1 || col > static_cast<std::uint64_t>(slots)) {
        fail(cp, "color " + std::to_string(col) + " outside 1.." + std::to_string(slots));
      }
      return static_cast<Color>(col);
    };
    if (v[i].is_array()) {
      if (v[i].size() != 2) fail(p, "a color range is [first, last]");
      const Color a = add(v[i][0], p + "/0");
      const Color b = add(v[i][1], p + "/1");
      if (b < a) fail(p, "empty color range");
      for (Color c = a; c <= b; ++c) set.insert(c);
    } else {
      set.insert(add(v[i], p));
    }
  }
  return set;
}

}  // namespace detail

inline InstanceFile instanceFromJson(const Json& doc) {
  using namespace detail;
  if (!doc.is_object()) fail("", "instance must be a JSON object");
  const int slots = positiveIntAt(member(doc, "", "slot_count"), "/slot_count");

  const Json& nodesJ = member(doc, "", "nodes");
  if (!nodesJ.is_array()) fail("/nodes", "expected an array");
  std::vector<std::string> names;
  std::map<std::string, NodeIndex> idx;
  for (std::size_t i = 0; i < nodesJ.size(); ++i) {
    const std::string p = "/nodes/" + std::to_string(i);
    names.push_back(nodeLabel(nodesJ[i], p));
    if (!idx.emplace(names.back(), i).second) fail(p, "duplicate node '" + names.back() + "'");
  }

  const Json& linksJ = member(doc, "", "links");
  if (!linksJ.is_array()) fail("/links", "expected an array");
  std::vector<Link> links;
  std::vector<ColorSet> colors;
  std::set<LinkId> linkIds;
  for (std::size_t i = 0; i < linksJ.size(); ++i) {
    const std::string p = "/links/" + std::to_string(i);
    const Json& lj = linksJ[i];
    Link l;
    l.id = LinkId(naturalAt(member(lj, p, "id"), p + "/id"));
    if (!linkIds.insert(l.id).second) fail(p + "/id", "duplicate link id " + std::to_string(l.id.value));
    l.u = nodeRef(idx, member(lj, p, "u"), p + "/u");
    l.v = nodeRef(idx, member(lj, p, "v"), p + "/v");
    if (l.u == l.v) fail(p, "self-loop");
    l.length = kmAt(member(lj, p, "length_km"), p + "/length_km");
    if (l.length < Length{}) fail(p + "/length_km", "negative length");
    links.push_back(l);
    colors.push_back(lj.contains("colors") ? colorsAt(lj["colors"], slots, p + "/colors") : ColorSet::full(slots));
  }

  InstanceFile out;
  out.instance.network = OpticalNetwork(slots, names, std::move(links), std::move(colors));

  if (doc.contains("demands")) {
    const Json& demJ = doc["demands"];
    if (!demJ.is_array()) fail("/demands", "expected an array");
    std::set<DemandId> seen;
    for (std::size_t i = 0; i < demJ.size(); ++i) {
      const std::string p = "/demands/" + std::to_string(i);
      const Json& dj = demJ[i];
      Demand d;
      d.id = DemandId(naturalAt(member(dj, p, "id"), p + "/id"));
      if (!seen.insert(d.id).second) fail(p + "/id", "duplicate demand id " + std::to_string(d.id.value));
      d.source = nodeRef(idx, member(dj, p, "s"), p + "/s");
      d.target = nodeRef(idx, member(dj, p, "t"), p + "/t");
      if (d.source == d.target) fail(p, "source equals target");
      d.width = positiveIntAt(member(dj, p, "width"), p + "/width");
      if (d.width > slots) fail(p + "/width", "width exceeds slot_count");
      d.reach = kmAt(member(dj, p, "reach_km"), p + "/reach_km");
      if (d.reach <= Length{}) fail(p + "/reach_km", "reach must be positive");
      out.instance.demands.push_back(d);
    }
  }
  if (doc.contains("meta")) {
    if (!doc["meta"].is_object()) fail("/meta", "expected an object");
    out.meta = doc["meta"];
  }
  out.instance.validate();
  return out;
}

inline Json readJsonFile(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) throw InputError(path.string() + ": cannot open");
  try {
    return Json::parse(f);
  } catch (const Json::parse_error& e) {
    throw InputError(path.string() + ": " + e.what());
  }
}

inline InstanceFile loadInstance(const std::filesystem::path& path) {
  try {
    return instanceFromJson(readJsonFile(path));
  } catch (const InputError& e) {
    const std::string msg = e.what();
    if (msg.rfind(path.string(), 0) == 0) throw;
    throw InputError(path.string() + ": " + msg);
  }
}

inline OrderedJson colorsToJson(const ColorSet& set) {
  OrderedJson arr = OrderedJson::array();
  for (auto [a, b] : set.ranges()) arr.push_back(OrderedJson::array({a, b}));
  return arr;
}

inline OrderedJson instanceToJson(const RestorationInstance& inst, const Json& meta = Json::object()) {
  const OpticalNetwork& net = inst.network;
  OrderedJson doc;
  doc["slot_count"] = net.slotCount();
  doc["nodes"] = net.nodeNames();
  OrderedJson links = OrderedJson::array();
  for (std::size_t i = 0; i < net.links().size(); ++i) {
    const Link& l = net.link(i);
    OrderedJson lj;
    lj["id"] = l.id.value;
    lj["u"] = net.nodeName(l.u);
    lj["v"] = net.nodeName(l.v);
    lj["length_km"] = l.length.km();
    lj["colors"] = colorsToJson(net.available(i));
    links.push_back(std::move(lj));
  }
  doc["links"] = std::move(links);
  OrderedJson demands = OrderedJson::array();
  for (const Demand& d : inst.demands) {
    OrderedJson dj;
    dj["id"] = d.id.value;
    dj["s"] = net.nodeName(d.source);
    dj["t"] = net.nodeName(d.target);
    dj["width"] = d.width;
    dj["reach_km"] = d.reach.km();
    demands.push_back(std::move(dj));
  }
  doc["demands"] = std::move(demands);
  if (!meta.empty()) doc["meta"] = OrderedJson::parse(meta.dump());
  return doc;
}

inline OrderedJson triplesToJson(const UsefulTripleSet& t) {
  OrderedJson doc;
  OrderedJson useful = OrderedJson::array();
  for (const auto& u : t.useful) useful.push_back({u.demand.value, u.link.value, u.color});
  doc["useful"] = std::move(useful);
  OrderedJson first = OrderedJson::object();
  for (const auto& [key, colors] : t.firstColors) {
    first[std::to_string(key.first.value)][std::to_string(key.second.value)] = std::vector<Color>(colors.begin(), colors.end());
  }
  doc["first_colors"] = std::move(first);
  OrderedJson valid = OrderedJson::object();
  for (const auto& [d, colors] : t.validFirstColors) {
    valid[std::to_string(d.value)] = std::vector<Color>(colors.begin(), colors.end());
  }
  doc["valid_first_colors"] = std::move(valid);
  OrderedJson bad = OrderedJson::array();
  for (DemandId d : t.nonReroutable) bad.push_back(d.value);
  doc["non_reroutable"] = std::move(bad);
  doc["stats"] = {{"triples_total", t.triplesTotal}, {"triples_useful", t.useful.size()}};
  return doc;
}

inline OrderedJson pathToJson(DemandId id, const RoutedPath& p) {
  OrderedJson j;
  j["demand"] = id.value;
  OrderedJson links = OrderedJson::array();
  for (LinkId l : p.links) links.push_back(l.value);
  j["links"] = std::move(links);
  j["first_color"] = p.firstColor;
  j["width"] = p.width;
  return j;
}

inline OrderedJson violationsToJson(const std::vector<Violation>& report) {
  OrderedJson arr = OrderedJson::array();
  for (const auto& v : report) {
    OrderedJson j;
    j["kind"] = toString(v.kind);
    OrderedJson ids = OrderedJson::array();
    for (DemandId d : v.demands) ids.push_back(d.value);
    j["demands"] = std::move(ids);
    j["message"] = v.message;
    arr.push_back(std::move(j));
  }
  return arr;
}

// Solution document shared by `solve`, `oracle` and `validate`.
struct SolutionDocument {
  std::string status;
  std::optional<std::int64_t> objective;
  std::map<DemandId, RoutedPath> paths;
  std::set<DemandId> restored;
  std::vector<Violation> violations;
  OrderedJson meta = OrderedJson::object();
};

inline OrderedJson solutionToJson(const SolutionDocument& s) {
  OrderedJson doc;
  doc["status"] = s.status;
  doc["objective"] = s.objective ? OrderedJson(*s.objective) : OrderedJson(nullptr);
  OrderedJson paths = OrderedJson::array();
  for (const auto& [id, p] : s.paths) paths.push_back(pathToJson(id, p));
  doc["paths"] = std::move(paths);
  OrderedJson restored = OrderedJson::array();
  for (DemandId d : s.restored) restored.push_back(d.value);
  doc["restored"] = std::move(restored);
  doc["violations"] = violationsToJson(s.violations);
  doc["meta"] = s.meta;
  return doc;
}

inline SolutionDocument solutionFromJson(const Json& doc) {
  using namespace detail;
  SolutionDocument s;
  const Json& st = member(doc, "", "status");
  if (!st.is_string()) fail("/status", "expected a string");
  s.status = st.get<std::string>();
  if (doc.contains("objective") && doc["objective"].is_number_integer()) s.objective = doc["objective"].get<std::int64_t>();
  if (doc.contains("paths")) {
    const Json& pj = doc["paths"];
    if (!pj.is_array()) fail("/paths", "expected an array");
    for (std::size_t i = 0; i < pj.size(); ++i) {
      const std::string p = "/paths/" + std::to_string(i);
      RoutedPath path;
      const DemandId id(naturalAt(member(pj[i], p, "demand"), p + "/demand"));
      const Json& links = member(pj[i], p, "links");
      if (!links.is_array()) fail(p + "/links", "expected an array");
      for (std::size_t k = 0; k < links.size(); ++k) {
        path.links.emplace_back(naturalAt(links[k], p + "/links/" + std::to_string(k)));
      }
      path.firstColor = positiveIntAt(member(pj[i], p, "first_color"), p + "/first_color");
      path.width = positiveIntAt(member(pj[i], p, "width"), p + "/width");
      if (!s.paths.emplace(id, std::move(path)).second) fail(p + "/demand", "duplicate path for demand");
    }
  }
  if (doc.contains("restored") && doc["restored"].is_array()) {
    for (std::size_t i = 0; i < doc["restored"].size(); ++i) {
      s.restored.insert(DemandId(naturalAt(doc["restored"][i], "/restored/" + std::to_string(i))));
    }
  }
  if (doc.contains("meta") && doc["meta"].is_object()) s.meta = OrderedJson::parse(doc["meta"].dump());
  return s;
}

inline void writeText(const std::filesystem::path& path, const std::string& text) {
  std::ofstream f(path);
  f << text;
  if (!f) throw std::runtime_error("cannot write " + path.string());
}

}  // namespace rsa
