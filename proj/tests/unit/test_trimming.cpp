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

#include <random>

#include "catch_amalgamated.hpp"
#include "fixtures.hpp"
#include "rsa/random_instance.hpp"
#include "rsa/trimming.hpp"

using namespace rsa;
using rsa::testing::fixture;

namespace {

// Independent reference: Bellman-Ford relaxation over all edges.
std::vector<Length> bellmanFord(const ColoredGraph& g, NodeIndex root) {
  std::vector<Length> d(g.nodeCount, Length::infinity());
  d[root] = Length{};
  for (std::size_t round = 0; round < g.nodeCount; ++round) {
    for (const GraphEdge& e : g.edges) {
      d[e.v] = std::min(d[e.v], d[e.u] + e.length);
      d[e.u] = std::min(d[e.u], d[e.v] + e.length);
    }
  }
  return d;
}

std::set<UsefulTriple> triples(std::initializer_list<std::array<int, 3>> v) {
  std::set<UsefulTriple> out;
  for (const auto& t : v) out.insert({DemandId(static_cast<std::uint64_t>(t[0])), LinkId(static_cast<std::uint64_t>(t[1])), t[2]});
  return out;
}

}  // namespace

TEST_CASE("dijkstra distances on the triangle", "[trimming]") {
  const auto t1 = fixture("t1");
  const DistanceTable t = shortestDistances(colorGraph(t1.network, 1), 0);
  CHECK(t.at(0) == Length{});
  CHECK(t.at(1) == Length::fromKm(1));
  CHECK(t.at(2) == Length::fromKm(2));
  CHECK(shortestPathLinks(colorGraph(t1.network, 1), t, 2) == std::vector<LinkId>{LinkId(1), LinkId(2)});
}

TEST_CASE("dijkstra agrees with bellman-ford on random multigraphs", "[trimming]") {
  for (std::uint64_t seed = 1; seed <= 150; ++seed) {
    const auto inst = randomInstance(seed);
    for (Color c = 1; c <= inst.network.slotCount(); ++c) {
      const ColoredGraph g = colorGraph(inst.network, c);
      for (NodeIndex r = 0; r < inst.network.nodeCount(); ++r) {
        const auto dj = shortestDistances(g, r);
        const auto bf = bellmanFord(g, r);
        for (NodeIndex n = 0; n < inst.network.nodeCount(); ++n) REQUIRE(dj.at(n) == bf[n]);
        for (NodeIndex n = 0; n < inst.network.nodeCount(); ++n) {
          if (!dj.reachable(n)) continue;
          const auto p = shortestPathLinks(g, dj, n);
          REQUIRE(p.has_value());
          Length len;
          for (LinkId l : *p) len += inst.network.linkById(l).length;
          REQUIRE(len == dj.at(n));
        }
      }
    }
  }
}

TEST_CASE("unreachable nodes report infinity", "[trimming]") {
  const auto t2 = fixture("t2");
  const DistanceTable t = shortestDistances(colorGraph(t2.network, 1), 0);
  CHECK(t.reachable(1));
  CHECK_FALSE(t.reachable(2));
  CHECK_FALSE(shortestPathLinks(colorGraph(t2.network, 1), t, 2).has_value());
}

TEST_CASE("useful triples of the golden fixtures", "[trimming]") {
  SECTION("triangle: the long link is useless") {
    const auto t = computeUsefulTriples(fixture("t1"));
    CHECK(t.useful == triples({{1, 1, 1}, {1, 1, 2}, {1, 2, 1}, {1, 2, 2}}));
    CHECK(t.firstColorsOf(DemandId(1), LinkId(3)).empty());
    CHECK(t.nonReroutable.empty());
    CHECK(t.validFirstColors.at(DemandId(1)) == std::set<Color>{1, 2});
    CHECK(t.triplesTotal == 6);
  }
  SECTION("occupied path: only first color 2") {
    const auto t = computeUsefulTriples(fixture("t2"));
    CHECK(t.firstColorsOf(DemandId(2), LinkId(1)) == std::set<Color>{2});
    CHECK(t.firstColorsOf(DemandId(2), LinkId(2)) == std::set<Color>{2});
    CHECK(t.useful == triples({{2, 1, 2}, {2, 1, 3}, {2, 2, 2}, {2, 2, 3}}));
    CHECK_FALSE(t.isUseful(DemandId(2), LinkId(1), 1));
  }
  SECTION("contiguity tail: color 4 useful but never a first color") {
    const auto t = computeUsefulTriples(fixture("t4"));
    CHECK(t.firstColorsOf(DemandId(4), LinkId(1)) == std::set<Color>{1, 2, 3});
    CHECK(t.firstColorsOf(DemandId(4), LinkId(2)) == std::set<Color>{1, 2, 3});
    CHECK(t.isUseful(DemandId(4), LinkId(1), 4));
    CHECK(t.useful.size() == 8);
  }
  SECTION("reach below the shortest distance") {
    const auto inst = fixture("t1_unreachable");
    const auto t = computeUsefulTriples(inst);
    CHECK(t.useful.empty());
    CHECK(t.nonReroutable == std::set<DemandId>{DemandId(1)});
    CHECK(isInfeasibleByTrimming(t, inst.demands));
  }
  SECTION("feasible fixture is not flagged") {
    const auto inst = fixture("t1");
    CHECK_FALSE(isInfeasibleByTrimming(computeUsefulTriples(inst), inst.demands));
  }
}

TEST_CASE("trimming is pure", "[trimming]") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto inst = randomInstance(seed);
    CHECK(computeUsefulTriples(inst) == computeUsefulTriples(inst));
  }
}

TEST_CASE("walks that revisit a node still mark links useful", "[trimming]") {
  // Reach is generous, so S-A-B-A-T style detours through the spur are
  // within reach, yet no simple S-T path uses the spur link.
  std::vector<Link> links{{LinkId(1), 0, 1, Length::fromKm(1)},
                          {LinkId(2), 1, 2, Length::fromKm(1)},
                          {LinkId(3), 1, 3, Length::fromKm(1)}};
  RestorationInstance inst{OpticalNetwork(1, {"S", "A", "T", "X"}, links, std::vector<ColorSet>(3, ColorSet::full(1))),
                           {{DemandId(1), 0, 2, 1, Length::fromKm(10)}}};
  const auto t = computeUsefulTriples(inst);
  CHECK(t.isUseful(DemandId(1), LinkId(3), 1));
  CHECK(t.isUseful(DemandId(1), LinkId(1), 1));
}
