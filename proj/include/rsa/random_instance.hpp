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

// Seeded generator of small connected multigraph instances for equivalence
// testing against the exhaustive oracle.

#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "rsa/network.hpp"

namespace rsa {

struct RandomInstanceParams {
  std::size_t minNodes = 3;
  std::size_t maxNodes = 6;
  std::size_t maxLinks = 9;
  int minSlots = 2;
  int maxSlots = 5;
  std::size_t maxDemands = 3;
  int maxWidth = 2;
  int maxLength = 5;
  double colorFreeProbability = 0.75;
};

inline RestorationInstance randomInstance(std::uint64_t seed, const RandomInstanceParams& p = {}) {
  std::mt19937_64 rng(seed);
  auto draw = [&](std::int64_t lo, std::int64_t hi) { return uniformInt(rng, lo, hi); };
  auto chance = [&](double prob) {
    return static_cast<double>(draw(0, 999'999)) < prob * 1'000'000.0;
  };

  const auto n = static_cast<std::size_t>(draw(static_cast<std::int64_t>(p.minNodes), static_cast<std::int64_t>(p.maxNodes)));
  const int slots = static_cast<int>(draw(p.minSlots, p.maxSlots));
  std::vector<std::string> names;
  for (std::size_t i = 0; i < n; ++i) names.push_back(std::to_string(i + 1));

  std::vector<std::pair<NodeIndex, NodeIndex>> ends;
  // Random spanning tree keeps the topology connected.
  for (std::size_t i = 1; i < n; ++i) {
    ends.emplace_back(static_cast<NodeIndex>(draw(0, static_cast<std::int64_t>(i) - 1)), i);
  }
  const auto total = static_cast<std::size_t>(
      draw(static_cast<std::int64_t>(n - 1), static_cast<std::int64_t>(std::max(p.maxLinks, n - 1))));
  while (ends.size() < total) {
    const auto a = static_cast<NodeIndex>(draw(0, static_cast<std::int64_t>(n) - 1));
    const auto b = static_cast<NodeIndex>(draw(0, static_cast<std::int64_t>(n) - 1));
    if (a != b) ends.emplace_back(a, b);  // parallel links allowed
  }

  std::vector<Link> links;
  std::vector<ColorSet> colors;
  for (std::size_t i = 0; i < ends.size(); ++i) {
    links.push_back({LinkId(i + 1), ends[i].first, ends[i].second, Length::fromKm(static_cast<double>(draw(1, p.maxLength)))});
    ColorSet set(slots);
    for (Color c = 1; c <= slots; ++c) {
      if (chance(p.colorFreeProbability)) set.insert(c);
    }
    colors.push_back(set);
  }
  RestorationInstance inst{OpticalNetwork(slots, names, links, colors), {}};

  // Hop-weighted shortest distances on the full topology, for reach draws.
  std::vector<std::vector<std::int64_t>> dist(n, std::vector<std::int64_t>(n, INT64_MAX / 4));
  for (std::size_t i = 0; i < n; ++i) dist[i][i] = 0;
  for (const Link& l : links) {
    const std::int64_t len = l.length.units() / Length::kUnitsPerKm;
    dist[l.u][l.v] = std::min(dist[l.u][l.v], len);
    dist[l.v][l.u] = std::min(dist[l.v][l.u], len);
  }
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) dist[i][j] = std::min(dist[i][j], dist[i][k] + dist[k][j]);
    }
  }

  const auto demandCount = static_cast<std::size_t>(draw(1, static_cast<std::int64_t>(p.maxDemands)));
  for (std::size_t k = 0; k < demandCount; ++k) {
    const auto s = static_cast<NodeIndex>(draw(0, static_cast<std::int64_t>(n) - 1));
    auto t = static_cast<NodeIndex>(draw(0, static_cast<std::int64_t>(n) - 2));
    if (t >= s) ++t;
    const int width = static_cast<int>(draw(1, std::min(p.maxWidth, slots)));
    const std::int64_t shortest = dist[s][t];
    // About half the demands get a reach equal to the shortest distance.
    const std::int64_t roll = draw(0, 9);
    std::int64_t reach = shortest;
    if (roll >= 5 && roll <= 8) reach = shortest + draw(1, 5);
    if (roll == 9) reach = std::max<std::int64_t>(1, shortest - 1);
    inst.demands.push_back({DemandId(k + 1), s, t, width, Length::fromKm(static_cast<double>(reach))});
  }
  return inst;
}

}  // namespace rsa
