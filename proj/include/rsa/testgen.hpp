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

// Congested restoration instances from shared path protection.
//
// Node pairs are visited in random order; a pair is provisioned when both a
// main path P and a link-disjoint recovery path R exist. P must avoid every
// occupied slot. R must avoid main-path slots, and may reuse a recovery
// slot only when the owner's main path is link-disjoint from P. Once no
// pair can be provisioned the recovery paths are released.
//
// Breaking a link then frees the slots of every main path through it and
// asks to restore exactly those demands. Their recovery paths are a
// witness that this first-kind instance is restorable.
//
// Both P and R use the shortest path inside the first (lowest) slot range
// that admits one within reach.

#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "rsa/extract.hpp"
#include "rsa/network.hpp"
#include "rsa/trimming.hpp"

namespace rsa {

enum class Modulation { Bpsk, Qpsk, Qam8 };

inline Length modulationReach(Modulation m) {
  switch (m) {
    case Modulation::Bpsk: return Length::fromKm(5000);
    case Modulation::Qpsk: return Length::fromKm(2500);
    case Modulation::Qam8: return Length::fromKm(1250);
  }
  return Length{};
}

inline const char* toString(Modulation m) {
  switch (m) {
    case Modulation::Bpsk: return "bpsk";
    case Modulation::Qpsk: return "qpsk";
    case Modulation::Qam8: return "8qam";
  }
  return "?";
}

inline Modulation parseModulation(const std::string& s) {
  if (s == "bpsk") return Modulation::Bpsk;
  if (s == "qpsk") return Modulation::Qpsk;
  if (s == "8qam") return Modulation::Qam8;
  throw InputError("unknown modulation '" + s + "' (expected bpsk|qpsk|8qam)");
}

inline const std::vector<int> kDefaultWidthSchedule{1, 4, 2, 1};
inline constexpr const char* kProvisioningRouter = "shortest-path/first-fit";

struct LoadedNetwork {
  OpticalNetwork base;  // topology, every slot free
  Length reach;
  std::vector<int> widthSchedule;
  std::uint64_t seed = 0;
  std::vector<Demand> demands;            // in provisioning order
  std::vector<RoutedPath> mainPaths;      // parallel to demands
  std::vector<RoutedPath> recoveryPaths;  // parallel to demands, released
  std::vector<std::string> log;

  // Base topology with main-path slots taken.
  OpticalNetwork network() const {
    std::vector<ColorSet> avail = base.availability();
    for (const RoutedPath& p : mainPaths) {
      for (LinkId l : p.links) avail[*base.findLink(l)].eraseRange(p.firstColor, p.width);
    }
    return base.withAvailability(std::move(avail));
  }

  // Links carrying at least one main path wider than one slot.
  std::vector<LinkId> eligibleLinks() const {
    std::set<LinkId> out;
    for (const RoutedPath& p : mainPaths) {
      if (p.width > 1) out.insert(p.links.begin(), p.links.end());
    }
    return {out.begin(), out.end()};
  }
};

namespace detail {

// Shortest path inside the lowest slot range that admits one within reach.
// `free(linkIndex, color)` decides availability; `excluded` links are skipped.
template <typename FreeFn>
std::optional<RoutedPath> firstFitShortest(const OpticalNetwork& net, NodeIndex s, NodeIndex t, int width,
                                           Length reach, FreeFn&& free, const std::set<LinkId>& excluded = {}) {
  for (Color first = 1; first + width - 1 <= net.slotCount(); ++first) {
    ColoredGraph g{first, width, net.nodeCount(), {}};
    for (std::size_t li = 0; li < net.links().size(); ++li) {
      const Link& l = net.link(li);
      if (excluded.count(l.id) != 0) continue;
      bool ok = true;
      for (Color c = first; ok && c < first + width; ++c) ok = free(li, c);
      if (ok) g.edges.push_back({l.u, l.v, l.length, l.id});
    }
    const DistanceTable dt = shortestDistances(g, s);
    if (dt.at(t) > reach) continue;
    return RoutedPath{*shortestPathLinks(g, dt, t), first, width};
  }
  return std::nullopt;
}

}  // namespace detail

inline LoadedNetwork generateLoadedNetwork(const OpticalNetwork& topology, Length reach,
                                           const std::vector<int>& widthSchedule, std::uint64_t seed) {
  for (std::size_t li = 0; li < topology.links().size(); ++li) {
    if (topology.available(li).size() != static_cast<std::size_t>(topology.slotCount())) {
      throw InputError("topology must have every slot free on every link (link " +
                       std::to_string(topology.link(li).id.value) + ")");
    }
  }
  for (int w : widthSchedule) {
    if (w < 1 || w > topology.slotCount()) throw InputError("width schedule entry out of range");
  }

  LoadedNetwork out;
  out.base = topology;
  out.reach = reach;
  out.widthSchedule = widthSchedule;
  out.seed = seed;
  std::mt19937_64 rng(seed);

  const std::size_t nLinks = topology.links().size();
  const auto slots = static_cast<std::size_t>(topology.slotCount()) + 1;
  std::vector<std::vector<int>> mainOwner(nLinks, std::vector<int>(slots, -1));
  std::vector<std::vector<std::vector<int>>> recoveryOwners(nLinks, std::vector<std::vector<int>>(slots));

  auto linkSet = [](const RoutedPath& p) { return std::set<LinkId>(p.links.begin(), p.links.end()); };
  std::vector<std::set<LinkId>> mainLinks;

  std::vector<std::pair<NodeIndex, NodeIndex>> pairs;
  for (NodeIndex a = 0; a < topology.nodeCount(); ++a) {
    for (NodeIndex b = a + 1; b < topology.nodeCount(); ++b) pairs.emplace_back(a, b);
  }

  for (std::size_t round = 1;; ++round) {
    bool progress = false;
    for (int width : widthSchedule) {
      shuffleInPlace(pairs, rng);
      std::size_t routed = 0;
      for (auto [s, t] : pairs) {
        auto mainFree = [&](std::size_t li, Color c) {
          return mainOwner[li][static_cast<std::size_t>(c)] < 0 && recoveryOwners[li][static_cast<std::size_t>(c)].empty();
        };
        auto main = detail::firstFitShortest(topology, s, t, width, reach, mainFree);
        if (!main) continue;
        const std::set<LinkId> mainSet = linkSet(*main);
        auto recoveryFree = [&](std::size_t li, Color c) {
          const auto ci = static_cast<std::size_t>(c);
          if (mainOwner[li][ci] >= 0) return false;
          for (int owner : recoveryOwners[li][ci]) {
            for (LinkId l : mainLinks[static_cast<std::size_t>(owner)]) {
              if (mainSet.count(l) != 0) return false;
            }
          }
          return true;
        };
        auto recovery = detail::firstFitShortest(topology, s, t, width, reach, recoveryFree, mainSet);
        if (!recovery) continue;

        const int idx = static_cast<int>(out.demands.size());
        out.demands.push_back({DemandId(out.demands.size() + 1), s, t, width, reach});
        for (LinkId l : main->links) {
          const std::size_t li = *topology.findLink(l);
          for (Color c = main->firstColor; c <= main->lastColor(); ++c) mainOwner[li][static_cast<std::size_t>(c)] = idx;
        }
        for (LinkId l : recovery->links) {
          const std::size_t li = *topology.findLink(l);
          for (Color c = recovery->firstColor; c <= recovery->lastColor(); ++c) {
            recoveryOwners[li][static_cast<std::size_t>(c)].push_back(idx);
          }
        }
        mainLinks.push_back(mainSet);
        out.mainPaths.push_back(*main);
        out.recoveryPaths.push_back(*recovery);
        ++routed;
        progress = true;
      }
      out.log.push_back("round " + std::to_string(round) + " width " + std::to_string(width) + ": " +
                        std::to_string(routed) + " demands");
    }
    if (!progress) break;
  }
  out.log.push_back("recovery paths released; " + std::to_string(out.demands.size()) + " demands loaded");
  return out;
}

enum class ScenarioKind { First, Second };

inline const char* toString(ScenarioKind k) { return k == ScenarioKind::First ? "first" : "second"; }

inline ScenarioKind parseScenarioKind(const std::string& s) {
  if (s == "first") return ScenarioKind::First;
  if (s == "second") return ScenarioKind::Second;
  throw InputError("unknown scenario kind '" + s + "' (expected first|second)");
}

struct Scenario {
  ScenarioKind kind = ScenarioKind::First;
  LinkId brokenLink;                    // the break that defines the instance
  std::optional<LinkId> firstBreak;     // second kind: the earlier break
  RestorationInstance instance;
  std::map<DemandId, RoutedPath> witness;  // first kind: recovery paths
  std::vector<DemandId> dropped;        // second kind: not re-provisioned
  std::vector<std::string> log;
};

namespace detail {

inline std::string describeLinks(const std::vector<LinkId>& ids) {
  std::string s;
  for (LinkId l : ids) s += (s.empty() ? "" : ", ") + std::to_string(l.value);
  return s.empty() ? "none" : s;
}

inline void requireEligible(const std::vector<LinkId>& eligible, LinkId link) {
  if (std::find(eligible.begin(), eligible.end(), link) == eligible.end()) {
    throw InputError("link " + std::to_string(link.value) +
                     " carries no demand wider than one slot; eligible links: " + describeLinks(eligible));
  }
}

inline bool uses(const RoutedPath& p, LinkId l) {
  return std::find(p.links.begin(), p.links.end(), l) != p.links.end();
}

// Instance for breaking `broken` in `base` loaded with `mains`.
inline RestorationInstance breakLink(const OpticalNetwork& base, const std::vector<Demand>& demands,
                                     const std::vector<RoutedPath>& mains, LinkId broken,
                                     const std::set<LinkId>& alreadyRemoved) {
  std::set<LinkId> removed = alreadyRemoved;
  removed.insert(broken);
  std::vector<ColorSet> avail = base.availability();
  RestorationInstance inst;
  for (std::size_t i = 0; i < mains.size(); ++i) {
    if (uses(mains[i], broken)) {
      inst.demands.push_back(demands[i]);
      continue;
    }
    for (LinkId l : mains[i].links) avail[*base.findLink(l)].eraseRange(mains[i].firstColor, mains[i].width);
  }
  inst.network = base.withAvailability(std::move(avail)).withoutLinks(removed);
  return inst;
}

}  // namespace detail

// Eligible link drawn with rng(seed); throws when none is eligible.
inline LinkId pickEligibleLink(const LoadedNetwork& loaded, std::uint64_t seed) {
  const std::vector<LinkId> eligible = loaded.eligibleLinks();
  if (eligible.empty()) throw InputError("no link carries a demand wider than one slot");
  std::mt19937_64 rng(seed);
  return eligible[static_cast<std::size_t>(uniformInt(rng, 0, static_cast<std::int64_t>(eligible.size()) - 1))];
}

inline Scenario makeScenario(const LoadedNetwork& loaded, LinkId brokenLink, ScenarioKind kind,
                             std::optional<LinkId> secondBreak = std::nullopt) {
  detail::requireEligible(loaded.eligibleLinks(), brokenLink);
  Scenario sc;
  sc.kind = kind;

  if (kind == ScenarioKind::First) {
    sc.brokenLink = brokenLink;
    sc.instance = detail::breakLink(loaded.base, loaded.demands, loaded.mainPaths, brokenLink, {});
    for (std::size_t i = 0; i < loaded.mainPaths.size(); ++i) {
      if (detail::uses(loaded.mainPaths[i], brokenLink)) sc.witness.emplace(loaded.demands[i].id, loaded.recoveryPaths[i]);
    }
    const auto report = verifySolution(sc.witness, sc.instance, true);
    if (!report.empty()) {
      throw std::logic_error("recovery paths do not certify the first-kind scenario: " + report.front().message);
    }
    sc.log.push_back("broke link " + std::to_string(brokenLink.value) + ", " +
                     std::to_string(sc.instance.demands.size()) + " demands to restore");
    return sc;
  }

  // Re-provision every demand broken by the first break, in demand order.
  sc.firstBreak = brokenLink;
  const OpticalNetwork afterFirst = loaded.base.withoutLinks({brokenLink});
  std::vector<Demand> demands;
  std::vector<RoutedPath> mains;
  std::vector<std::size_t> brokenIdx;
  for (std::size_t i = 0; i < loaded.mainPaths.size(); ++i) {
    if (detail::uses(loaded.mainPaths[i], brokenLink)) {
      brokenIdx.push_back(i);
      continue;
    }
    demands.push_back(loaded.demands[i]);
    mains.push_back(loaded.mainPaths[i]);
  }
  std::vector<ColorSet> avail = afterFirst.availability();
  for (const RoutedPath& p : mains) {
    for (LinkId l : p.links) avail[*afterFirst.findLink(l)].eraseRange(p.firstColor, p.width);
  }
  for (std::size_t i : brokenIdx) {
    const Demand& d = loaded.demands[i];
    auto isFree = [&](std::size_t li, Color c) { return avail[li].contains(c); };
    auto path = detail::firstFitShortest(afterFirst, d.source, d.target, d.width, d.reach, isFree);
    if (!path) {
      sc.dropped.push_back(d.id);
      sc.log.push_back("demand " + std::to_string(d.id.value) + " could not be re-provisioned; dropped");
      continue;
    }
    for (LinkId l : path->links) avail[*afterFirst.findLink(l)].eraseRange(path->firstColor, path->width);
    demands.push_back(d);
    mains.push_back(*path);
  }

  std::set<LinkId> eligibleSet;
  for (const RoutedPath& p : mains) {
    if (p.width > 1) eligibleSet.insert(p.links.begin(), p.links.end());
  }
  const std::vector<LinkId> eligible(eligibleSet.begin(), eligibleSet.end());
  LinkId second;
  if (secondBreak) {
    detail::requireEligible(eligible, *secondBreak);
    second = *secondBreak;
  } else {
    if (eligible.empty()) throw InputError("no eligible link remains for the second break");
    std::mt19937_64 rng(loaded.seed ^ (0x9e3779b97f4a7c15ULL * (brokenLink.value + 1)));
    second = eligible[static_cast<std::size_t>(uniformInt(rng, 0, static_cast<std::int64_t>(eligible.size()) - 1))];
  }
  sc.brokenLink = second;
  sc.instance = detail::breakLink(loaded.base, demands, mains, second, {brokenLink});
  sc.log.push_back("broke link " + std::to_string(brokenLink.value) + ", re-provisioned " +
                   std::to_string(brokenIdx.size() - sc.dropped.size()) + " of " + std::to_string(brokenIdx.size()) +
                   " demands, then broke link " + std::to_string(second.value) + ", " +
                   std::to_string(sc.instance.demands.size()) + " demands to restore");
  return sc;
}

}  // namespace rsa
