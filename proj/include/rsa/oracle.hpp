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

// Exhaustive reference solver for small instances.
//
// Nothing here uses the Dijkstra code or the MILP: paths are enumerated by
// depth-first search, pruned with Floyd-Warshall distances, and joint
// assignments are found by backtracking.

#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "rsa/network.hpp"
#include "rsa/trimming.hpp"

namespace rsa {

struct OracleGuard {
  std::size_t maxNodes = 8;
  int maxSlots = 6;
  std::size_t maxDemands = 4;
};

class OracleGuardError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class OracleMode { Feasibility, MaxSubset };

struct OracleOutcome {
  bool feasible = false;
  // Full routing of every demand (feasible only).
  std::map<DemandId, RoutedPath> witness;
  std::int64_t minTotalSlots = 0;     // sum of width * hops over the cheapest full routing
  std::size_t optimalSolutions = 0;   // number of full routings reaching minTotalSlots

  // Max-subset mode only.
  std::size_t maxSubsetSize = 0;
  std::size_t maxSubsetCount = 0;  // distinct demand subsets of maximum size
  std::map<DemandId, RoutedPath> subsetWitness;
};

namespace detail {

inline void checkGuard(const RestorationInstance& inst, const OracleGuard& guard) {
  if (inst.network.nodeCount() > guard.maxNodes || inst.network.slotCount() > guard.maxSlots ||
      inst.demands.size() > guard.maxDemands) {
    throw OracleGuardError("instance exceeds the oracle guard (nodes <= " + std::to_string(guard.maxNodes) +
                           ", slots <= " + std::to_string(guard.maxSlots) +
                           ", demands <= " + std::to_string(guard.maxDemands) + ")");
  }
}

// All-pairs distances over links accepted by `usable`.
inline std::vector<std::vector<Length>> allPairs(const OpticalNetwork& net,
                                                 const std::function<bool(std::size_t)>& usable) {
  const std::size_t n = net.nodeCount();
  std::vector<std::vector<Length>> d(n, std::vector<Length>(n, Length::infinity()));
  for (std::size_t i = 0; i < n; ++i) d[i][i] = Length{};
  for (std::size_t li = 0; li < net.links().size(); ++li) {
    if (!usable(li)) continue;
    const Link& l = net.link(li);
    d[l.u][l.v] = std::min(d[l.u][l.v], l.length);
    d[l.v][l.u] = std::min(d[l.v][l.u], l.length);
  }
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) d[i][j] = std::min(d[i][j], d[i][k] + d[k][j]);
    }
  }
  return d;
}

// Every simple path (as link indices) from `from` to `to` of length <= limit
// over usable links.
inline std::vector<std::vector<std::size_t>> simplePaths(const OpticalNetwork& net, NodeIndex from, NodeIndex to,
                                                         Length limit,
                                                         const std::function<bool(std::size_t)>& usable) {
  const auto dist = allPairs(net, usable);
  std::vector<std::vector<std::size_t>> out;
  std::vector<std::size_t> stack;
  std::vector<bool> onPath(net.nodeCount(), false);
  std::function<void(NodeIndex, Length)> dfs = [&](NodeIndex at, Length sofar) {
    if (at == to) {
      out.push_back(stack);
      return;
    }
    for (std::size_t li = 0; li < net.links().size(); ++li) {
      if (!usable(li)) continue;
      const Link& l = net.link(li);
      if (!l.touches(at)) continue;
      const NodeIndex next = l.opposite(at);
      if (onPath[next]) continue;
      const Length len = sofar + l.length;
      if (len + dist[next][to] > limit) continue;
      onPath[next] = true;
      stack.push_back(li);
      dfs(next, len);
      stack.pop_back();
      onPath[next] = false;
    }
  };
  if (dist[from][to] > limit) return out;
  onPath[from] = true;
  dfs(from, Length{});
  return out;
}

// Shortest length over all enumerated simple paths from `from` to each node.
inline std::vector<Length> enumeratedDistances(const OpticalNetwork& net, NodeIndex from,
                                               const std::function<bool(std::size_t)>& usable) {
  std::vector<Length> best(net.nodeCount(), Length::infinity());
  for (NodeIndex to = 0; to < net.nodeCount(); ++to) {
    for (const auto& p : simplePaths(net, from, to, Length::infinity(), usable)) {
      Length len;
      for (std::size_t li : p) len += net.link(li).length;
      best[to] = std::min(best[to], len);
    }
  }
  return best;
}

struct Candidate {
  std::vector<std::size_t> links;  // link indices
  Color first = 1;
  int width = 1;
  std::int64_t slots = 0;
};

inline bool conflicts(const Candidate& a, const Candidate& b) {
  if (a.first + a.width - 1 < b.first || b.first + b.width - 1 < a.first) return false;
  for (std::size_t l : a.links) {
    if (std::find(b.links.begin(), b.links.end(), l) != b.links.end()) return true;
  }
  return false;
}

inline RoutedPath toRoutedPath(const OpticalNetwork& net, const Candidate& c) {
  RoutedPath p{{}, c.first, c.width};
  for (std::size_t li : c.links) p.links.push_back(net.link(li).id);
  return p;
}

}  // namespace detail

// Usefulness by enumeration: (d, l, c) is useful iff for some first color f
// with c in {f .. f+w-1}, a simple path from s_d to one endpoint of l and a
// simple path from the other endpoint to t_d, all inside G_{f:w}, have total
// length (including l) within r_d.
inline UsefulTripleSet oracleUsefulTriples(const RestorationInstance& inst, const OracleGuard& guard = {}) {
  detail::checkGuard(inst, guard);
  const OpticalNetwork& net = inst.network;
  UsefulTripleSet out;
  for (const Demand& d : inst.demands) {
    auto& valid = out.validFirstColors[d.id];
    for (std::size_t li = 0; li < net.links().size(); ++li) out.triplesTotal += net.available(li).size();
    for (Color f = 1; f + d.width - 1 <= net.slotCount(); ++f) {
      auto usable = [&](std::size_t li) { return net.available(li).containsRange(f, d.width); };
      if (!detail::simplePaths(net, d.source, d.target, d.reach, usable).empty()) valid.insert(f);
      const auto fromS = detail::enumeratedDistances(net, d.source, usable);
      const auto fromT = detail::enumeratedDistances(net, d.target, usable);
      for (std::size_t li = 0; li < net.links().size(); ++li) {
        if (!usable(li)) continue;
        const Link& l = net.link(li);
        if (fromS[l.u] + l.length + fromT[l.v] > d.reach && fromS[l.v] + l.length + fromT[l.u] > d.reach) continue;
        out.firstColors[{d.id, l.id}].insert(f);
        for (Color c = f; c < f + d.width; ++c) out.useful.insert({d.id, l.id, c});
      }
    }
    if (valid.empty()) out.nonReroutable.insert(d.id);
  }
  return out;
}

inline OracleOutcome oracleSolve(const RestorationInstance& inst, OracleMode mode, const OracleGuard& guard = {}) {
  detail::checkGuard(inst, guard);
  const OpticalNetwork& net = inst.network;
  const std::size_t n = inst.demands.size();

  std::vector<std::vector<detail::Candidate>> cands(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Demand& d = inst.demands[i];
    auto any = [](std::size_t) { return true; };
    for (const auto& links : detail::simplePaths(net, d.source, d.target, d.reach, any)) {
      for (Color f = 1; f + d.width - 1 <= net.slotCount(); ++f) {
        bool ok = true;
        for (std::size_t li : links) ok = ok && net.available(li).containsRange(f, d.width);
        if (ok) {
          cands[i].push_back({links, f, d.width, static_cast<std::int64_t>(links.size()) * d.width});
        }
      }
    }
  }

  OracleOutcome out;
  std::vector<int> choice(n, -1);

  auto compatible = [&](std::size_t i, const detail::Candidate& c) {
    for (std::size_t j = 0; j < i; ++j) {
      if (choice[j] >= 0 && detail::conflicts(cands[j][static_cast<std::size_t>(choice[j])], c)) return false;
    }
    return true;
  };
  auto snapshot = [&]() {
    std::map<DemandId, RoutedPath> paths;
    for (std::size_t j = 0; j < n; ++j) {
      if (choice[j] >= 0) {
        paths.emplace(inst.demands[j].id, detail::toRoutedPath(net, cands[j][static_cast<std::size_t>(choice[j])]));
      }
    }
    return paths;
  };

  // Full routings: cheapest total and how many reach it.
  std::optional<std::int64_t> best;
  std::function<void(std::size_t, std::int64_t)> full = [&](std::size_t i, std::int64_t cost) {
    if (best && cost > *best) return;
    if (i == n) {
      if (!best || cost < *best) {
        best = cost;
        out.optimalSolutions = 0;
        out.witness = snapshot();
      }
      ++out.optimalSolutions;
      return;
    }
    for (std::size_t k = 0; k < cands[i].size(); ++k) {
      if (!compatible(i, cands[i][k])) continue;
      choice[i] = static_cast<int>(k);
      full(i + 1, cost + cands[i][k].slots);
      choice[i] = -1;
    }
  };
  full(0, 0);
  out.feasible = best.has_value();
  if (best) out.minTotalSlots = *best;
  if (mode == OracleMode::Feasibility) return out;

  // Maximum restorable subsets: test every subset of demands, largest first.
  std::function<bool(const std::vector<std::size_t>&, std::size_t)> routable =
      [&](const std::vector<std::size_t>& members, std::size_t k) {
        if (k == members.size()) return true;
        const std::size_t i = members[k];
        for (std::size_t c = 0; c < cands[i].size(); ++c) {
          if (!compatible(i, cands[i][c])) continue;
          choice[i] = static_cast<int>(c);
          const bool ok = routable(members, k + 1);
          if (ok) return true;
          choice[i] = -1;
        }
        return false;
      };
  std::size_t maxSubsets = 0;
  for (std::size_t size = n + 1; size-- > 0 && maxSubsets == 0;) {
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
      if (static_cast<std::size_t>(__builtin_popcountll(mask)) != size) continue;
      std::vector<std::size_t> members;
      for (std::size_t i = 0; i < n; ++i) {
        if ((mask >> i) & 1U) members.push_back(i);
      }
      std::fill(choice.begin(), choice.end(), -1);
      if (!routable(members, 0)) continue;
      if (maxSubsets == 0) {
        out.maxSubsetSize = size;
        out.subsetWitness = snapshot();
      }
      ++maxSubsets;
    }
  }
  out.maxSubsetCount = maxSubsets;
  return out;
}

}  // namespace rsa
