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

#include <filesystem>
#include <string>

#include "rsa/io.hpp"
#include "rsa/solver.hpp"

namespace rsa::testing {

inline std::filesystem::path dataPath(const std::string& relative) {
  return std::filesystem::path(RSA_DATA_DIR) / relative;
}

inline RestorationInstance fixture(const std::string& name) {
  return loadInstance(dataPath("fixtures/" + name + ".json")).instance;
}

inline OpticalNetwork topology(const std::string& name) {
  return loadInstance(dataPath("topologies/" + name + ".json")).instance.network;
}

inline SolverConfig cbcConfig(double timeLimit = 120.0) {
  SolverConfig cfg;
  cfg.solver = "cbc";
  cfg.timeLimitSeconds = timeLimit;
  return cfg;
}

// Topology with every slot free and the given slot count.
inline OpticalNetwork freshTopology(const std::string& name, int slots) {
  const OpticalNetwork net = topology(name);
  return OpticalNetwork(slots, net.nodeNames(), net.links(),
                        std::vector<ColorSet>(net.links().size(), ColorSet::full(slots)));
}

}  // namespace rsa::testing
