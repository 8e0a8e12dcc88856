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

// Network, demand and path model for flex-grid restoration problems.
//
// Links are undirected here. A link's endpoint order (u, v) is kept only so
// that the MILP builder can name its two directed copies.

#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "rsa/types.hpp"

namespace rsa {

struct Link {
  LinkId id;
  NodeIndex u = 0;
  NodeIndex v = 0;
  Length length;

  bool touches(NodeIndex n) const { return u == n || v == n; }
  NodeIndex opposite(NodeIndex n) const { return n == u ? v : u; }
};

class OpticalNetwork {
 public:
  OpticalNetwork() = default;

  OpticalNetwork(int slotCount, std::vector<std::string> nodeNames,
                 std::vector<Link> links, std::vector<ColorSet> available)
      : slotCount_(slotCount),
        nodeNames_(std::move(nodeNames)),
        links_(std::move(links)),
        available_(std::move(available)) {
    if (slotCount_ < 1) throw InputError("slot_count must be a positive integer");
    for (NodeIndex i = 0; i < nodeNames_.size(); ++i) {
      if (!nodeIndex_.emplace(nodeNames_[i], i).second) {
        throw InputError("duplicate node '" + nodeNames_[i] + "'");
      }
    }
    if (available_.size() != links_.size()) {
      throw InputError("availability table does not match link count");
    }
    for (std::size_t i = 0; i < links_.size(); ++i) {
      const Link& l = links_[i];
      const std::string where = "link " + std::to_string(l.id.value);
      if (l.u >= nodeNames_.size() || l.v >= nodeNames_.size()) {
        throw InputError(where + ": endpoint is not a network node");
      }
      if (l.u == l.v) throw InputError(where + ": self-loop");
      if (l.length < Length{}) throw InputError(where + ": negative length");
      if (available_[i].slotCount() != slotCount_) {
        throw InputError(where + ": availability not over 1.." + std::to_string(slotCount_));
      }
      if (!linkIndex_.emplace(l.id, i).second) {
        throw InputError("duplicate link id " + std::to_string(l.id.value));
      }
    }
  }

  int slotCount() const { return slotCount_; }
  std::size_t nodeCount() const { return nodeNames_.size(); }
  const std::vector<std::string>& nodeNames() const { return nodeNames_; }
  const std::string& nodeName(NodeIndex n) const { return nodeNames_.at(n); }
  const std::vector<Link>& links() const { return links_; }
  const Link& link(std::size_t index) const { return links_.at(index); }
  const ColorSet& available(std::size_t linkIndex) const { return available_.at(linkIndex); }
  const std::vector<ColorSet>& availability() const { return available_; }

  std::optional<NodeIndex> findNode(const std::string& name) const {
    auto it = nodeIndex_.find(name);
    if (it == nodeIndex_.end()) return std::nullopt;
    return it->second;
  }

  std::optional<std::size_t> findLink(LinkId id) const {
    auto it = linkIndex_.find(id);
    if (it == linkIndex_.end()) return std::nullopt;
    return it->second;
  }

  const Link& linkById(LinkId id) const {
    auto idx = findLink(id);
    if (!idx) throw InputError("unknown link id " + std::to_string(id.value));
    return links_[*idx];
  }
  const ColorSet& availableById(LinkId id) const {
    auto idx = findLink(id);
    if (!idx) throw InputError("unknown link id " + std::to_string(id.value));
    return available_[*idx];
  }

  OpticalNetwork withAvailability(std::vector<ColorSet> available) const {
    return OpticalNetwork(slotCount_, nodeNames_, links_, std::move(available));
  }

  OpticalNetwork withoutLinks(const std::set<LinkId>& removed) const {
    std::vector<Link> keptLinks;
    std::vector<ColorSet> keptColors;
    for (std::size_t i = 0; i < links_.size(); ++i) {
      if (removed.count(links_[i].id) != 0) continue;
      keptLinks.push_back(links_[i]);
      keptColors.push_back(available_[i]);
    }
    return OpticalNetwork(slotCount_, nodeNames_, std::move(keptLinks), std::move(keptColors));
  }

 private:
  int slotCount_ = 1;
  std::vector<std::string> nodeNames_;
  std::vector<Link> links_;
  std::vector<ColorSet> available_;
  std::unordered_map<std::string, NodeIndex> nodeIndex_;
  std::unordered_map<LinkId, std::size_t> linkIndex_;
};

struct Demand {
  DemandId id;
  NodeIndex source = 0;
  NodeIndex target = 0;
  int width = 1;
  Length reach;
};

struct RestorationInstance {
  OpticalNetwork network;
  std::vector<Demand> demands;

  // Throws InputError on the first broken demand invariant.
  void validate() const {
    std::set<DemandId> seen;
    for (const Demand& d : demands) {
      const std::string where = "demand " + std::to_string(d.id.value);
      if (!seen.insert(d.id).second) throw InputError("duplicate demand id " + std::to_string(d.id.value));
      if (d.source >= network.nodeCount() || d.target >= network.nodeCount()) {
        throw InputError(where + ": endpoint is not a network node");
      }
      if (d.source == d.target) throw InputError(where + ": source equals target");
      if (d.width < 1) throw InputError(where + ": width must be >= 1");
      if (d.width > network.slotCount()) throw InputError(where + ": width exceeds slot count");
      if (d.reach <= Length{}) throw InputError(where + ": reach must be positive");
    }
  }

  const Demand* findDemand(DemandId id) const {
    auto it = std::find_if(demands.begin(), demands.end(),
                           [id](const Demand& d) { return d.id == id; });
    return it == demands.end() ? nullptr : &*it;
  }
};

struct GraphEdge {
  NodeIndex u = 0;
  NodeIndex v = 0;
  Length length;
  LinkId link;
};

// Undirected multigraph of the links whose slots {firstColor .. firstColor+width-1}
// are all free. width == 1 gives the single-color graph.
struct ColoredGraph {
  Color firstColor = 1;
  int width = 1;
  std::size_t nodeCount = 0;
  std::vector<GraphEdge> edges;

  std::vector<LinkId> linkIds() const {
    std::vector<LinkId> ids;
    ids.reserve(edges.size());
    for (const auto& e : edges) ids.push_back(e.link);
    return ids;
  }
};

inline ColoredGraph rangeGraph(const OpticalNetwork& net, Color first, int width) {
  if (width < 1) throw InputError("range width must be >= 1");
  if (first < 1 || first + width - 1 > net.slotCount()) {
    throw InputError("color range " + std::to_string(first) + ":" + std::to_string(width) +
                     " exceeds slot count " + std::to_string(net.slotCount()));
  }
  ColoredGraph g{first, width, net.nodeCount(), {}};
  for (std::size_t i = 0; i < net.links().size(); ++i) {
    if (!net.available(i).containsRange(first, width)) continue;
    const Link& l = net.link(i);
    g.edges.push_back({l.u, l.v, l.length, l.id});
  }
  return g;
}

inline ColoredGraph colorGraph(const OpticalNetwork& net, Color c) { return rangeGraph(net, c, 1); }

struct RoutedPath {
  std::vector<LinkId> links;
  Color firstColor = 1;
  int width = 1;

  Color lastColor() const { return firstColor + width - 1; }
  friend bool operator==(const RoutedPath&, const RoutedPath&) = default;
};

// Node sequence of a link sequence that starts at `source`, or nullopt when
// the links do not chain. Consecutive links must share exactly one endpoint
// and the walk must leave the source (and enter the target) rather than
// touching it in passing.
inline std::optional<std::vector<NodeIndex>> walkNodes(const OpticalNetwork& net,
                                                       const std::vector<LinkId>& links,
                                                       NodeIndex source, NodeIndex target) {
  if (links.empty()) return std::nullopt;
  std::vector<const Link*> seq;
  for (LinkId id : links) {
    auto idx = net.findLink(id);
    if (!idx) return std::nullopt;
    seq.push_back(&net.link(*idx));
  }
  auto shared = [](const Link& a, const Link& b) {
    std::set<NodeIndex> sa{a.u, a.v};
    std::vector<NodeIndex> common;
    for (NodeIndex n : {b.u, b.v}) {
      if (sa.count(n) != 0) common.push_back(n);
    }
    return common;
  };
  if (!seq.front()->touches(source) || !seq.back()->touches(target)) return std::nullopt;
  for (std::size_t i = 0; i + 1 < seq.size(); ++i) {
    if (shared(*seq[i], *seq[i + 1]).size() != 1) return std::nullopt;
  }
  if (seq.size() >= 2) {
    auto first = shared(*seq[0], *seq[1]);
    auto last = shared(*seq[seq.size() - 2], *seq.back());
    if (first.front() == source || last.front() == target) return std::nullopt;
  }
  std::vector<NodeIndex> nodes{source};
  NodeIndex at = source;
  for (const Link* l : seq) {
    if (!l->touches(at)) return std::nullopt;
    at = l->opposite(at);
    nodes.push_back(at);
  }
  if (at != target) return std::nullopt;
  return nodes;
}

inline Length pathLength(const OpticalNetwork& net, const std::vector<LinkId>& links) {
  Length total;
  for (LinkId id : links) total += net.linkById(id).length;
  return total;
}

inline bool isValidPath(const RoutedPath& path, const Demand& demand, const OpticalNetwork& net) {
  if (path.width != demand.width || path.firstColor < 1) return false;
  if (path.lastColor() > net.slotCount()) return false;
  if (!walkNodes(net, path.links, demand.source, demand.target)) return false;
  if (pathLength(net, path.links) > demand.reach) return false;
  for (LinkId id : path.links) {
    if (!net.availableById(id).containsRange(path.firstColor, path.width)) return false;
  }
  return true;
}

inline bool pathsIntersect(const RoutedPath& a, const RoutedPath& b) {
  const bool colorsOverlap = a.firstColor <= b.lastColor() && b.firstColor <= a.lastColor();
  if (!colorsOverlap) return false;
  for (LinkId l : a.links) {
    if (std::find(b.links.begin(), b.links.end(), l) != b.links.end()) return true;
  }
  return false;
}

}  // namespace rsa
