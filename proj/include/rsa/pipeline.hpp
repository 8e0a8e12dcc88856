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

// Trim, build, solve, extract and verify in one call.

#pragma once

#include <chrono>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "rsa/extract.hpp"
#include "rsa/milp_model.hpp"
#include "rsa/solver.hpp"
#include "rsa/trimming.hpp"

namespace rsa {

struct PipelineOptions {
  Variant variant = Variant::Trimmed;
  Mode mode = Mode::Feasibility;
  SolverConfig solver;
  BuildOptions build;
  std::function<void(const MilpModel&)> onModel;  // called after the build
};

struct PipelineResult {
  SolveStatus status = SolveStatus::SolverError;
  bool timedOut = false;
  bool provenByTrimming = false;  // infeasible without a model or solver
  bool solverInvoked = false;
  std::optional<std::int64_t> objective;
  ExtractedSolution solution;
  std::vector<Violation> violations;
  // Max-subset mode: demands trimming proved unroutable, left out of the model.
  std::vector<DemandId> skipped;
  std::size_t variables = 0;
  std::size_t constraints = 0;
  double trimSeconds = 0;
  double buildSeconds = 0;
  double solveSeconds = 0;
  std::string message;

  bool hasSolution() const { return status == SolveStatus::Optimal || status == SolveStatus::Feasible; }
  double totalSeconds() const { return trimSeconds + buildSeconds + solveSeconds; }
};

// Extraction failures propagate as ExtractionError.
inline PipelineResult runPipeline(const RestorationInstance& input, const PipelineOptions& opt) {
  using Clock = std::chrono::steady_clock;
  auto since = [](Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); };
  PipelineResult res;
  const RestorationInstance* inst = &input;
  RestorationInstance reduced;
  std::optional<UsefulTripleSet> triples;

  if (opt.variant == Variant::Trimmed) {
    const auto t0 = Clock::now();
    triples = computeUsefulTriples(input);
    if (!triples->nonReroutable.empty()) {
      if (opt.mode == Mode::Feasibility) {
        res.trimSeconds = since(t0);
        res.status = SolveStatus::Infeasible;
        res.provenByTrimming = true;
        res.message = "trimming: some demand has no valid path";
        return res;
      }
      reduced.network = input.network;
      for (const Demand& d : input.demands) {
        if (triples->nonReroutable.count(d.id) != 0) {
          res.skipped.push_back(d.id);
        } else {
          reduced.demands.push_back(d);
        }
      }
      inst = &reduced;
      triples = computeUsefulTriples(reduced);
    }
    res.trimSeconds = since(t0);
  }

  const auto t1 = Clock::now();
  const MilpModel model = buildModel(*inst, triples ? &*triples : nullptr, opt.variant, opt.mode, opt.build);
  res.buildSeconds = since(t1);
  res.variables = model.variables().size();
  res.constraints = model.constraints().size();
  if (opt.onModel) opt.onModel(model);

  const auto t2 = Clock::now();
  const SolveOutcome out = solve(model, opt.solver);
  res.solveSeconds = since(t2);
  res.status = out.status;
  res.timedOut = out.timedOut;
  res.solverInvoked = out.solverInvoked;
  res.message = out.message;
  if (!out.assignment) return res;

  res.objective = out.objective;
  res.solution = extractPaths(*out.assignment, model, *inst);
  res.violations = verifySolution(res.solution.paths, *inst, opt.mode == Mode::Feasibility);
  return res;
}

}  // namespace rsa
