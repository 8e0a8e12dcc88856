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

#pragma once

#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "rsa/milp_model.hpp"

namespace rsa {

// The assignment does not decompose into one simple path per demand. This
// points at a modelling bug, never at bad input.
class ExtractionError : public std::runtime_error {
 public:
  ExtractionError(DemandId d, const std::string& what)
      : std::runtime_error("demand " + std::to_string(d.value) + ": " + what), demand(d) {}
  DemandId demand;
};

struct ExtractedSolution {
  std::map<DemandId, RoutedPath> paths;
  std::set<DemandId> restored;  // every routed demand; y_d = 1 in max-subset mode
};

inline ExtractedSolution extractPaths(const std::vector<std::uint8_t>& assignment, const MilpModel& model,
                                      const RestorationInstance& inst) {
  if (assignment.size() != model.variables().size()) {
    throw std::invalid_argument("assignment does not match the model");
  }
  const OpticalNetwork& net = inst.network;
  std::map<DemandId, std::map<DirectedLinkRef, std::set<Color>>> used;
  std::set<DemandId> selected;
  for (VarIndex v = 0; v < assignment.size(); ++v) {
    if (assignment[v] == 0) continue;
    const auto& key = model.variables()[v];
    if (const auto* f = std::get_if<FlowVar>(&key)) {
      used[f->demand][f->arc].insert(f->color);
    } else {
      selected.insert(std::get<SelectVar>(key).demand);
    }
  }

  ExtractedSolution out;
  for (const Demand& d : inst.demands) {
    auto& arcs = used[d.id];
    const bool routed = model.mode == Mode::Feasibility || selected.count(d.id) != 0;
    if (!routed) {
      if (!arcs.empty()) throw ExtractionError(d.id, "flow present although the demand is not selected");
      continue;
    }
    auto tail = [&](const DirectedLinkRef& a) {
      const Link& l = net.linkById(a.link);
      return a.direction == Direction::Forward ? l.u : l.v;
    };
    auto head = [&](const DirectedLinkRef& a) {
      const Link& l = net.linkById(a.link);
      return a.direction == Direction::Forward ? l.v : l.u;
    };

    std::vector<DirectedLinkRef> leaving;
    for (const auto& [arc, colors] : arcs) {
      if (tail(arc) == d.source) leaving.push_back(arc);
    }
    if (leaving.size() != 1) {
      throw ExtractionError(d.id, std::to_string(leaving.size()) + " links carry flow out of the source");
    }
    const Color first = *arcs[leaving.front()].begin();
    std::set<Color> range;
    for (Color c = first; c < first + d.width; ++c) range.insert(c);

    RoutedPath path{{}, first, d.width};
    std::set<NodeIndex> visited{d.source};
    std::set<DirectedLinkRef> consumed;
    NodeIndex at = d.source;
    while (at != d.target) {
      const DirectedLinkRef* next = nullptr;
      for (const auto& [arc, colors] : arcs) {
        if (tail(arc) != at || colors.count(first) == 0) continue;
        if (next != nullptr) throw ExtractionError(d.id, "flow splits at node " + net.nodeName(at));
        next = &arc;
      }
      if (next == nullptr) throw ExtractionError(d.id, "flow stops at node " + net.nodeName(at));
      if (arcs[*next] != range) {
        throw ExtractionError(d.id, "link " + std::to_string(next->link.value) +
                                        " does not carry exactly the contiguous range starting at " +
                                        std::to_string(first));
      }
      path.links.push_back(next->link);
      consumed.insert(*next);
      at = head(*next);
      if (!visited.insert(at).second) throw ExtractionError(d.id, "path revisits node " + net.nodeName(at));
    }
    if (consumed.size() != arcs.size()) {
      throw ExtractionError(d.id, "flow outside the traced path (cycle or detached component)");
    }
    out.paths.emplace(d.id, std::move(path));
    out.restored.insert(d.id);
  }
  for (const auto& [id, arcs] : used) {
    if (!arcs.empty() && inst.findDemand(id) == nullptr) throw ExtractionError(id, "flow for unknown demand");
  }
  return out;
}

struct Violation {
  enum class Kind { UnknownDemand, Unrouted, Structure, Reach, Availability, Intersection } kind;
  std::vector<DemandId> demands;
  std::string message;
};

inline const char* toString(Violation::Kind k) {
  switch (k) {
    case Violation::Kind::UnknownDemand: return "unknown_demand";
    case Violation::Kind::Unrouted: return "unrouted";
    case Violation::Kind::Structure: return "structure";
    case Violation::Kind::Reach: return "reach";
    case Violation::Kind::Availability: return "availability";
    case Violation::Kind::Intersection: return "intersection";
  }
  return "?";
}

// Empty result certifies the paths. With requireAll every demand of the
// instance must have a path.
inline std::vector<Violation> verifySolution(const std::map<DemandId, RoutedPath>& paths,
                                             const RestorationInstance& inst, bool requireAll = false) {
  std::vector<Violation> report;
  const OpticalNetwork& net = inst.network;
  using K = Violation::Kind;
  for (const auto& [id, p] : paths) {
    const Demand* d = inst.findDemand(id);
    const std::string who = "demand " + std::to_string(id.value);
    if (d == nullptr) {
      report.push_back({K::UnknownDemand, {id}, who + " is not part of the instance"});
      continue;
    }
    bool linksKnown = true;
    for (LinkId l : p.links) linksKnown = linksKnown && net.findLink(l).has_value();
    if (!linksKnown || p.width != d->width || p.firstColor < 1 || p.lastColor() > net.slotCount() ||
        !walkNodes(net, p.links, d->source, d->target)) {
      report.push_back({K::Structure, {id}, who + ": links, endpoints or color range malformed"});
      continue;
    }
    if (pathLength(net, p.links) > d->reach) {
      report.push_back({K::Reach, {id},
                        who + ": length " + formatKm(pathLength(net, p.links)) + " km exceeds reach " +
                            formatKm(d->reach) + " km"});
    }
    for (LinkId l : p.links) {
      if (!net.availableById(l).containsRange(p.firstColor, p.width)) {
        report.push_back({K::Availability, {id},
                          who + ": slots " + std::to_string(p.firstColor) + ".." + std::to_string(p.lastColor()) +
                              " not free on link " + std::to_string(l.value)});
      }
    }
  }
  for (auto a = paths.begin(); a != paths.end(); ++a) {
    for (auto b = std::next(a); b != paths.end(); ++b) {
      if (pathsIntersect(a->second, b->second)) {
        report.push_back({K::Intersection, {a->first, b->first},
                          "demands " + std::to_string(a->first.value) + " and " + std::to_string(b->first.value) +
                              " share a link and a slot"});
      }
    }
  }
  if (requireAll) {
    for (const Demand& d : inst.demands) {
      if (paths.count(d.id) == 0) {
        report.push_back({K::Unrouted, {d.id}, "demand " + std::to_string(d.id.value) + " has no path"});
      }
    }
  }
  return report;
}

}  // namespace rsa
