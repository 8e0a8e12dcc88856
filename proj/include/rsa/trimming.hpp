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

// Useful-triple computation.
//
// A triple (demand d, link l, color c) is useful when some walk from s_d to
// t_d of length at most r_d crosses l inside a range graph G_{f:w_d} whose
// range {f .. f+w_d-1} contains c. For each candidate first color f we run
// two Dijkstra passes (from s_d and from t_d) on G_{f:w_d} and mark link
// l = {u, v} iff
//
//   dist(s_d, u) + len(l) + dist(t_d, v) <= r_d   or
//   dist(s_d, v) + len(l) + dist(t_d, u) <= r_d.
//
// Every variable of the MILP that does not correspond to a useful triple is
// identically zero and is dropped by the Trimmed variant.

#pragma once

#include <functional>
#include <map>
#include <optional>
#include <queue>
#include <set>
#include <tuple>
#include <vector>

#include "rsa/network.hpp"

namespace rsa {

struct DistanceTable {
  NodeIndex root = 0;
  std::vector<Length> dist;  // Length::infinity() when unreachable
  std::vector<std::optional<std::size_t>> parentEdge;  // index into graph.edges

  bool reachable(NodeIndex n) const { return !dist.at(n).isInfinite(); }
  Length at(NodeIndex n) const { return dist.at(n); }
};

inline DistanceTable shortestDistances(const ColoredGraph& g, NodeIndex root) {
  if (root >= g.nodeCount) throw InputError("shortestDistances: root is not a graph node");
  std::vector<std::vector<std::size_t>> incident(g.nodeCount);
  for (std::size_t i = 0; i < g.edges.size(); ++i) {
    incident[g.edges[i].u].push_back(i);
    incident[g.edges[i].v].push_back(i);
  }
  DistanceTable t{root, std::vector<Length>(g.nodeCount, Length::infinity()),
                  std::vector<std::optional<std::size_t>>(g.nodeCount)};
  using Entry = std::pair<Length, NodeIndex>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> heap;
  t.dist[root] = Length{};
  heap.emplace(Length{}, root);
  while (!heap.empty()) {
    auto [d, n] = heap.top();
    heap.pop();
    if (d > t.dist[n]) continue;
    for (std::size_t ei : incident[n]) {
      const GraphEdge& e = g.edges[ei];
      const NodeIndex m = e.u == n ? e.v : e.u;
      const Length cand = d + e.length;
      if (cand < t.dist[m]) {
        t.dist[m] = cand;
        t.parentEdge[m] = ei;
        heap.emplace(cand, m);
      }
    }
  }
  return t;
}

// Link sequence of a shortest root->target path, or nullopt if unreachable.
inline std::optional<std::vector<LinkId>> shortestPathLinks(const ColoredGraph& g,
                                                            const DistanceTable& t,
                                                            NodeIndex target) {
  if (!t.reachable(target)) return std::nullopt;
  std::vector<LinkId> rev;
  NodeIndex at = target;
  while (at != t.root) {
    const GraphEdge& e = g.edges[*t.parentEdge[at]];
    rev.push_back(e.link);
    at = e.u == at ? e.v : e.u;
  }
  return std::vector<LinkId>(rev.rbegin(), rev.rend());
}

struct UsefulTriple {
  DemandId demand;
  LinkId link;
  Color color = 0;
  friend auto operator<=>(const UsefulTriple&, const UsefulTriple&) = default;
};

struct UsefulTripleSet {
  std::set<UsefulTriple> useful;
  // Only non-empty entries are stored.
  std::map<std::pair<DemandId, LinkId>, std::set<Color>> firstColors;
  // One entry per demand, possibly empty.
  std::map<DemandId, std::set<Color>> validFirstColors;
  std::set<DemandId> nonReroutable;
  // Number of (demand, link, color) triples with the color free on the link.
  std::size_t triplesTotal = 0;

  bool isUseful(DemandId d, LinkId l, Color c) const { return useful.count({d, l, c}) != 0; }

  const std::set<Color>& firstColorsOf(DemandId d, LinkId l) const {
    static const std::set<Color> kEmpty;
    auto it = firstColors.find({d, l});
    return it == firstColors.end() ? kEmpty : it->second;
  }

  bool operator==(const UsefulTripleSet& o) const {
    return useful == o.useful && firstColors == o.firstColors &&
           validFirstColors == o.validFirstColors && nonReroutable == o.nonReroutable;
  }
};

inline UsefulTripleSet computeUsefulTriples(const RestorationInstance& inst) {
  const OpticalNetwork& net = inst.network;
  UsefulTripleSet out;
  for (const Demand& d : inst.demands) {
    auto& valid = out.validFirstColors[d.id];
    for (std::size_t i = 0; i < net.links().size(); ++i) out.triplesTotal += net.available(i).size();
    for (Color first = 1; first + d.width - 1 <= net.slotCount(); ++first) {
      const ColoredGraph g = rangeGraph(net, first, d.width);
      const DistanceTable fromS = shortestDistances(g, d.source);
      if (fromS.at(d.target) > d.reach) continue;
      valid.insert(first);
      const DistanceTable fromT = shortestDistances(g, d.target);
      for (const GraphEdge& e : g.edges) {
        const bool forward = fromS.at(e.u) + e.length + fromT.at(e.v) <= d.reach;
        const bool backward = fromS.at(e.v) + e.length + fromT.at(e.u) <= d.reach;
        if (!forward && !backward) continue;
        out.firstColors[{d.id, e.link}].insert(first);
        for (Color c = first; c < first + d.width; ++c) out.useful.insert({d.id, e.link, c});
      }
    }
    if (valid.empty()) out.nonReroutable.insert(d.id);
  }
  return out;
}

// True proves the instance infeasible without a solver call.
inline bool isInfeasibleByTrimming(const UsefulTripleSet& triples, const std::vector<Demand>& demands) {
  for (const Demand& d : demands) {
    if (triples.nonReroutable.count(d.id) != 0) return true;
  }
  return false;
}

}  // namespace rsa
