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

// rsa-restore: restoration RSA on flex-grid optical networks.
//
// Exit codes:
//   0   success (feasible, or clean report)
//   1   bad input or usage
//   2   solver failure
//   3   solution extraction or self-check failure
//   4   validate found violations
//   10  infeasible
//   20  time limit without a solution

#include <chrono>
#include <iostream>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "rsa/bench.hpp"
#include "rsa/extract.hpp"
#include "rsa/io.hpp"
#include "rsa/milp_model.hpp"
#include "rsa/oracle.hpp"
#include "rsa/pipeline.hpp"
#include "rsa/solver.hpp"
#include "rsa/testgen.hpp"
#include "rsa/trimming.hpp"

namespace {

using namespace rsa;

enum Exit : int {
  kOk = 0,
  kInput = 1,
  kSolver = 2,
  kExtraction = 3,
  kViolations = 4,
  kInfeasible = 10,
  kTimeout = 20,
};

void emit(const std::string& outPath, const OrderedJson& doc) {
  const std::string text = doc.dump(2) + "\n";
  if (outPath.empty() || outPath == "-") {
    std::cout << text;
  } else {
    writeText(outPath, text);
  }
}

OrderedJson provenance(const std::string& command) {
  OrderedJson m;
  m["tool"] = "rsa-restore";
  m["tool_version"] = kToolVersion;
  m["command"] = command;
  return m;
}

std::vector<int> parseIntList(const std::string& s) {
  std::vector<int> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t pos = 0;
      out.push_back(std::stoi(item, &pos));
      if (pos != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw InputError("expected a comma-separated integer list, got '" + s + "'");
    }
  }
  if (out.empty()) throw InputError("empty integer list");
  return out;
}

std::vector<std::string> splitList(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

// ---------------------------------------------------------------- trim

struct TrimArgs {
  std::string instance, out = "-";
};

int runTrim(const TrimArgs& a) {
  const InstanceFile file = loadInstance(a.instance);
  const auto t0 = std::chrono::steady_clock::now();
  const UsefulTripleSet t = computeUsefulTriples(file.instance);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  OrderedJson doc = triplesToJson(t);
  const bool infeasible = isInfeasibleByTrimming(t, file.instance.demands);
  doc["verdict"] = infeasible ? "infeasible" : "undecided";
  doc["stats"]["trim_seconds"] = secs;
  OrderedJson meta = provenance("trim");
  meta["instance"] = a.instance;
  doc["meta"] = meta;
  emit(a.out, doc);
  if (infeasible) {
    std::cerr << "infeasible: demand(s) without any valid path:";
    for (DemandId d : t.nonReroutable) std::cerr << ' ' << d.value;
    std::cerr << '\n';
    return kInfeasible;
  }
  return kOk;
}

// ---------------------------------------------------------------- solve

struct SolveArgs {
  std::string instance, out = "-";
  std::string variant = "trimmed", mode = "feasibility", solver = "cbc";
  double timeLimit = 500;
  std::string workDir;
  bool keepFiles = false;
  std::string lpOut;
};

int runSolve(const SolveArgs& a) {
  const InstanceFile file = loadInstance(a.instance);
  PipelineOptions opt;
  opt.variant = parseVariant(a.variant);
  opt.mode = parseMode(a.mode);
  opt.solver.solver = a.solver;
  opt.solver.timeLimitSeconds = a.timeLimit;
  opt.solver.workDir = a.workDir;
  opt.solver.keepFiles = a.keepFiles;
  if (!a.lpOut.empty()) opt.onModel = [&](const MilpModel& m) { writeText(a.lpOut, emitLpText(m)); };

  SolutionDocument sol;
  sol.meta = provenance("solve");
  sol.meta["instance"] = a.instance;
  sol.meta["variant"] = toString(opt.variant);
  sol.meta["mode"] = toString(opt.mode);
  sol.meta["solver"] = a.solver;
  if (file.meta.contains("seed")) sol.meta["seed"] = OrderedJson::parse(file.meta["seed"].dump());
  sol.meta["time_limit_seconds"] = a.timeLimit;

  PipelineResult res;
  try {
    res = runPipeline(file.instance, opt);
  } catch (const ExtractionError& e) {
    std::cerr << "extraction failed: " << e.what() << '\n';
    sol.status = "extraction_error";
    emit(a.out, solutionToJson(sol));
    return kExtraction;
  }

  sol.meta["variables"] = res.variables;
  sol.meta["constraints"] = res.constraints;
  sol.meta["trim_seconds"] = res.trimSeconds;
  sol.meta["build_seconds"] = res.buildSeconds;
  sol.meta["solve_seconds"] = res.solveSeconds;
  sol.meta["solver_invoked"] = res.solverInvoked;
  sol.meta["timed_out"] = res.timedOut;
  if (res.provenByTrimming) sol.meta["proof"] = res.message;
  if (!res.skipped.empty()) {
    OrderedJson skipped = OrderedJson::array();
    for (DemandId d : res.skipped) skipped.push_back(d.value);
    sol.meta["unroutable"] = skipped;
  }

  sol.status = toString(res.status);
  switch (res.status) {
    case SolveStatus::SolverError:
      std::cerr << "solver error: " << res.message << '\n';
      emit(a.out, solutionToJson(sol));
      return kSolver;
    case SolveStatus::Infeasible:
      emit(a.out, solutionToJson(sol));
      return kInfeasible;
    case SolveStatus::TimeLimit:
      emit(a.out, solutionToJson(sol));
      return kTimeout;
    case SolveStatus::Optimal:
    case SolveStatus::Feasible:
      break;
  }
  sol.objective = res.objective;
  sol.paths = res.solution.paths;
  sol.restored = res.solution.restored;
  sol.violations = res.violations;
  sol.meta["restored_count"] = sol.restored.size();
  emit(a.out, solutionToJson(sol));
  if (!sol.violations.empty()) {
    std::cerr << "extracted paths fail verification: " << sol.violations.front().message << '\n';
    return kExtraction;
  }
  return kOk;
}

// ---------------------------------------------------------------- oracle

struct OracleArgs {
  std::string instance, out = "-", mode = "feasibility";
};

int runOracle(const OracleArgs& a) {
  const InstanceFile file = loadInstance(a.instance);
  const Mode mode = parseMode(a.mode);
  const OracleOutcome o =
      oracleSolve(file.instance, mode == Mode::Feasibility ? OracleMode::Feasibility : OracleMode::MaxSubset);
  SolutionDocument sol;
  sol.meta = provenance("oracle");
  sol.meta["instance"] = a.instance;
  sol.meta["mode"] = toString(mode);
  sol.meta["solver"] = "oracle";
  if (mode == Mode::Feasibility) {
    sol.status = o.feasible ? "optimal" : "infeasible";
    if (o.feasible) sol.objective = o.minTotalSlots;
    sol.paths = o.witness;
    sol.meta["optimal_solutions"] = o.optimalSolutions;
  } else {
    sol.status = "optimal";
    sol.paths = o.subsetWitness;
    sol.meta["max_subset_size"] = o.maxSubsetSize;
    sol.meta["max_subset_count"] = o.maxSubsetCount;
  }
  for (const auto& [id, p] : sol.paths) sol.restored.insert(id);
  sol.violations = verifySolution(sol.paths, file.instance, mode == Mode::Feasibility && o.feasible);
  emit(a.out, solutionToJson(sol));
  if (mode == Mode::Feasibility && !o.feasible) return kInfeasible;
  return kOk;
}

// ---------------------------------------------------------------- gen

struct GenArgs {
  std::string topology, out = "-", manifest;
  std::string modulation = "bpsk", kind = "first", widths = "1,4,2,1";
  std::uint64_t seed = 1;
  std::vector<std::uint64_t> breaks;
  int slots = 0;
  bool selfTest = false, listEligible = false;
  std::string solver = "cbc";
  double timeLimit = 500;
};

OpticalNetwork withAllSlotsFree(const OpticalNetwork& net, int slots) {
  std::vector<ColorSet> full(net.links().size(), ColorSet::full(slots));
  std::vector<Link> links = net.links();
  return OpticalNetwork(slots, net.nodeNames(), links, full);
}

int runGen(const GenArgs& a) {
  const InstanceFile topo = loadInstance(a.topology);
  const Modulation mod = parseModulation(a.modulation);
  const ScenarioKind kind = parseScenarioKind(a.kind);
  const std::vector<int> schedule = parseIntList(a.widths);
  if (a.breaks.size() > 2) throw InputError("--break may be given at most twice");
  if (a.breaks.size() == 2 && kind != ScenarioKind::Second) throw InputError("a second --break needs --kind second");
  const OpticalNetwork base = withAllSlotsFree(topo.instance.network, a.slots > 0 ? a.slots : topo.instance.network.slotCount());

  const LoadedNetwork loaded = generateLoadedNetwork(base, modulationReach(mod), schedule, a.seed);
  const std::vector<LinkId> eligible = loaded.eligibleLinks();
  if (a.listEligible) {
    for (LinkId l : eligible) std::cout << l.value << '\n';
    return kOk;
  }

  LinkId first;
  if (!a.breaks.empty()) {
    first = LinkId(a.breaks[0]);
  } else {
    first = pickEligibleLink(loaded, a.seed);
  }
  std::optional<LinkId> second;
  if (a.breaks.size() == 2) second = LinkId(a.breaks[1]);
  const Scenario sc = makeScenario(loaded, first, kind, second);

  std::string stem = std::filesystem::path(a.topology).stem().string();
  const std::string caseName = stem + "-" + toString(mod) + "-" + toString(kind) + "-l" +
                               std::to_string(sc.brokenLink.value) + "-s" + std::to_string(a.seed);
  Json meta;
  meta["case"] = caseName;
  meta["kind"] = toString(kind);
  meta["modulation"] = toString(mod);
  meta["broken_link"] = sc.brokenLink.value;
  if (sc.firstBreak) meta["first_break"] = sc.firstBreak->value;
  meta["seed"] = a.seed;
  meta["router"] = kProvisioningRouter;
  meta["tool_version"] = kToolVersion;
  emit(a.out, instanceToJson(sc.instance, meta));

  if (!a.manifest.empty()) {
    OrderedJson m = provenance("gen");
    m["case"] = caseName;
    m["topology"] = a.topology;
    m["seed"] = a.seed;
    m["modulation"] = toString(mod);
    m["reach_km"] = modulationReach(mod).km();
    m["slot_count"] = base.slotCount();
    m["width_schedule"] = schedule;
    m["router"] = kProvisioningRouter;
    m["kind"] = toString(kind);
    m["broken_link"] = sc.brokenLink.value;
    if (sc.firstBreak) m["first_break"] = sc.firstBreak->value;
    m["demands_loaded"] = loaded.demands.size();
    m["demands_to_restore"] = sc.instance.demands.size();
    OrderedJson dropped = OrderedJson::array();
    for (DemandId d : sc.dropped) dropped.push_back(d.value);
    m["dropped"] = dropped;
    OrderedJson el = OrderedJson::array();
    for (LinkId l : eligible) el.push_back(l.value);
    m["eligible_links"] = el;
    OrderedJson log = loaded.log;
    for (const auto& line : sc.log) log.push_back(line);
    m["log"] = log;
    writeText(a.manifest, m.dump(2) + "\n");
  }

  if (a.selfTest && kind == ScenarioKind::First) {
    PipelineOptions opt;
    opt.solver.solver = a.solver;
    opt.solver.timeLimitSeconds = a.timeLimit;
    const PipelineResult res = runPipeline(sc.instance, opt);
    if (res.status == SolveStatus::SolverError) {
      std::cerr << "self-test solver error: " << res.message << '\n';
      return kSolver;
    }
    if (!res.hasSolution() || !res.violations.empty()) {
      std::cerr << "self-test failed: first-kind scenario reported " << toString(res.status) << '\n';
      return kExtraction;
    }
    std::cerr << "self-test passed: " << toString(res.status) << ", objective " << *res.objective << '\n';
  }
  return kOk;
}

// ---------------------------------------------------------------- validate

struct ValidateArgs {
  std::string instance, solution, out = "-";
  bool requireAll = false;
};

int runValidate(const ValidateArgs& a) {
  const InstanceFile file = loadInstance(a.instance);
  SolutionDocument sol;
  try {
    sol = solutionFromJson(readJsonFile(a.solution));
  } catch (const InputError& e) {
    throw InputError(a.solution + ": " + e.what());
  }
  const auto report = verifySolution(sol.paths, file.instance, a.requireAll);
  OrderedJson doc;
  doc["clean"] = report.empty();
  doc["paths_checked"] = sol.paths.size();
  doc["violations"] = violationsToJson(report);
  OrderedJson meta = provenance("validate");
  meta["instance"] = a.instance;
  meta["solution"] = a.solution;
  doc["meta"] = meta;
  emit(a.out, doc);
  return report.empty() ? kOk : kViolations;
}

// ---------------------------------------------------------------- bench

struct BenchArgs {
  std::string corpus, variants = "base,notrim,trimmed", solvers = "cbc", csv = "-", markdown, workDir;
  unsigned jobs = 1;
  double timeLimit = 500, hardThreshold = 100;
  bool noTiming = false;
};

int runBenchCommand(const BenchArgs& a) {
  BenchOptions opt;
  opt.variants.clear();
  for (const auto& v : splitList(a.variants)) opt.variants.push_back(parseVariant(v));
  opt.solvers = splitList(a.solvers);
  if (opt.variants.empty() || opt.solvers.empty()) throw InputError("need at least one variant and one solver");
  for (const auto& s : opt.solvers) {
    const SolverCommand cmd = resolveSolver(s);
    if (cmd.missingExecutable) {
      std::cerr << *cmd.missingExecutable << '\n';
      return kSolver;
    }
  }
  opt.jobs = a.jobs;
  opt.timeLimitSeconds = a.timeLimit;
  opt.hardThresholdSeconds = a.hardThreshold;
  opt.workDir = a.workDir;
  const auto rows = runBench(loadCorpus(a.corpus), opt);
  const std::string csv = benchCsv(rows, !a.noTiming);
  if (a.csv == "-") {
    std::cout << csv;
  } else {
    writeText(a.csv, csv);
  }
  if (!a.markdown.empty()) {
    writeText(a.markdown, "# Benchmark (rsa-restore " + std::string(kToolVersion) + ")\n\n" + benchMarkdown(rows, opt));
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Restoration routing and spectrum allocation on flex-grid optical networks"};
  app.set_version_flag("--version", std::string(rsa::kToolVersion));
  app.require_subcommand(1);

  TrimArgs trim;
  auto* cTrim = app.add_subcommand("trim", "Compute useful (demand, link, color) triples");
  cTrim->add_option("instance", trim.instance, "Instance JSON")->required()->check(CLI::ExistingFile);
  cTrim->add_option("-o,--output", trim.out, "Output file ('-' for stdout)");

  SolveArgs sv;
  auto* cSolve = app.add_subcommand("solve", "Build the MILP, solve it and extract paths");
  cSolve->add_option("instance", sv.instance, "Instance JSON")->required()->check(CLI::ExistingFile);
  cSolve->add_option("--variant", sv.variant, "base|notrim|trimmed")->check(CLI::IsMember({"base", "notrim", "trimmed"}));
  cSolve->add_option("--mode", sv.mode, "feasibility|maxsubset")->check(CLI::IsMember({"feasibility", "maxsubset"}));
  cSolve->add_option("--solver", sv.solver, "cbc|scip|cmd:<template with {lp_file} {sol_file} {time_limit}>");
  cSolve->add_option("--time-limit", sv.timeLimit, "Solver time limit in seconds")->check(CLI::PositiveNumber);
  cSolve->add_option("--work-dir", sv.workDir, "Directory for solver files");
  cSolve->add_flag("--keep-files", sv.keepFiles, "Keep the LP, solution and log files");
  cSolve->add_option("--write-lp", sv.lpOut, "Also write the LP model to this file");
  cSolve->add_option("-o,--output", sv.out, "Output file ('-' for stdout)");

  OracleArgs orc;
  auto* cOracle = app.add_subcommand("oracle", "Exhaustive reference solve (small instances only)");
  cOracle->add_option("instance", orc.instance, "Instance JSON")->required()->check(CLI::ExistingFile);
  cOracle->add_option("--mode", orc.mode, "feasibility|maxsubset")->check(CLI::IsMember({"feasibility", "maxsubset"}));
  cOracle->add_option("-o,--output", orc.out, "Output file ('-' for stdout)");

  GenArgs gen;
  auto* cGen = app.add_subcommand("gen", "Generate a link-break scenario from a topology");
  cGen->add_option("topology", gen.topology, "Topology JSON")->required()->check(CLI::ExistingFile);
  cGen->add_option("--modulation", gen.modulation, "bpsk|qpsk|8qam")->check(CLI::IsMember({"bpsk", "qpsk", "8qam"}));
  cGen->add_option("--seed", gen.seed, "Random seed");
  cGen->add_option("--break", gen.breaks, "Link to break (twice for a fixed second break)")->expected(1)->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
  cGen->add_option("--kind", gen.kind, "first|second")->check(CLI::IsMember({"first", "second"}));
  cGen->add_option("--slots", gen.slots, "Override the slot count of the topology")->check(CLI::PositiveNumber);
  cGen->add_option("--widths", gen.widths, "Width schedule, comma separated");
  cGen->add_option("--manifest", gen.manifest, "Write the scenario manifest here");
  cGen->add_flag("--list-eligible", gen.listEligible, "Print links eligible for breaking and exit");
  cGen->add_flag("--self-test", gen.selfTest, "Solve a first-kind scenario and fail unless it is feasible");
  cGen->add_option("--solver", gen.solver, "Solver for --self-test");
  cGen->add_option("--time-limit", gen.timeLimit, "Time limit for --self-test")->check(CLI::PositiveNumber);
  cGen->add_option("-o,--output", gen.out, "Output file ('-' for stdout)");

  ValidateArgs val;
  auto* cVal = app.add_subcommand("validate", "Check a solution against an instance");
  cVal->add_option("instance", val.instance, "Instance JSON")->required()->check(CLI::ExistingFile);
  cVal->add_option("solution", val.solution, "Solution JSON")->required()->check(CLI::ExistingFile);
  cVal->add_flag("--require-all", val.requireAll, "Every demand must have a path");
  cVal->add_option("-o,--output", val.out, "Output file ('-' for stdout)");

  BenchArgs bench;
  auto* cBench = app.add_subcommand("bench", "Run variants and solvers over a corpus of instances");
  cBench->add_option("corpus", bench.corpus, "Directory of instance JSON files")->required()->check(CLI::ExistingDirectory);
  cBench->add_option("--variants", bench.variants, "Comma separated variants");
  cBench->add_option("--solvers", bench.solvers, "Comma separated solvers");
  cBench->add_option("--jobs", bench.jobs, "Concurrent cells")->check(CLI::PositiveNumber);
  cBench->add_option("--time-limit", bench.timeLimit, "Solver time limit per cell")->check(CLI::PositiveNumber);
  cBench->add_option("--hard-threshold", bench.hardThreshold, "Seconds above which a case counts as hard");
  cBench->add_option("--csv", bench.csv, "CSV output ('-' for stdout)");
  cBench->add_option("--markdown", bench.markdown, "Markdown report output");
  cBench->add_option("--work-dir", bench.workDir, "Directory for solver files");
  cBench->add_flag("--no-timing", bench.noTiming, "Leave timing columns empty");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kInput;
  }

  try {
    if (*cTrim) return runTrim(trim);
    if (*cSolve) return runSolve(sv);
    if (*cOracle) return runOracle(orc);
    if (*cGen) return runGen(gen);
    if (*cVal) return runValidate(val);
    if (*cBench) return runBenchCommand(bench);
  } catch (const rsa::InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInput;
  } catch (const rsa::OracleGuardError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInput;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kSolver;
  }
  return kInput;
}
