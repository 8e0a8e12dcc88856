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

#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "catch_amalgamated.hpp"
#include "fixtures.hpp"
#include "rsa/milp_model.hpp"
#include "rsa/solver.hpp"
#include "rsa/trimming.hpp"

using namespace rsa;
using rsa::testing::fixture;

namespace {

namespace fs = std::filesystem;

MilpModel triangleModel() {
  const auto inst = fixture("t1");
  const auto t = computeUsefulTriples(inst);
  return buildModel(inst, &t, Variant::Trimmed, Mode::Feasibility);
}

// Solver stand-in: a shell script that writes `solution` to the solution
// file and records its time-limit argument.
struct FakeSolver {
  fs::path dir;
  std::string config;

  explicit FakeSolver(const std::string& solution, const std::string& tag) {
    dir = fs::temp_directory_path() / ("rsa-fake-" + tag);
    fs::create_directories(dir);
    {
      std::ofstream(dir / "solution.txt") << solution;
    }
    std::ofstream script(dir / "fake.sh");
    script << "#!/bin/sh\n";
    script << "echo \"$3\" > '" << (dir / "limit.txt").string() << "'\n";
    if (!solution.empty()) script << "cp '" << (dir / "solution.txt").string() << "' \"$2\"\n";
    script << "echo fake solver ran\n";
    config = "cmd:sh '" + (dir / "fake.sh").string() + "' {lp_file} {sol_file} {time_limit}";
  }
  ~FakeSolver() {
    std::error_code ec;
    fs::remove_all(dir, ec);
  }
  SolveOutcome run(const MilpModel& m, double limit = 7) const {
    SolverConfig cfg;
    cfg.solver = config;
    cfg.timeLimitSeconds = limit;
    return solve(m, cfg);
  }
};

}  // namespace

TEST_CASE("CBC solution files", "[solver]") {
  SECTION("optimal") {
    const auto raw = parseSolutionText(
        "Optimal - objective value 2.00000000\n"
        "      0 x_d1_l1_f_c1                          1                       1\n"
        "      4 x_d1_l2_f_c1                          1                       1\n");
    CHECK(raw.kind == RawSolution::Kind::Optimal);
    REQUIRE(raw.values.size() == 2);
    CHECK(raw.values[1].first == "x_d1_l2_f_c1");
    CHECK(raw.values[1].second == 1.0);
  }
  SECTION("infeasible") {
    CHECK(parseSolutionText("Infeasible - objective value 0.00000000\n").kind == RawSolution::Kind::Infeasible);
    CHECK(parseSolutionText("Integer infeasible - objective value 0.00000000\n").kind ==
          RawSolution::Kind::Infeasible);
  }
  SECTION("stopped") {
    CHECK(parseSolutionText("Stopped on time - objective value 5.00000000\n      0 a 1 0\n").kind ==
          RawSolution::Kind::StoppedWithIncumbent);
    CHECK(parseSolutionText("Stopped on time (no integer solution - continuous used) - objective value 1.5\n").kind ==
          RawSolution::Kind::StoppedWithout);
  }
  SECTION("flagged rows") {
    const auto raw = parseSolutionText("Optimal - objective value 1\n**    3 x_d1_l1_f_c1   1   0\n");
    REQUIRE(raw.values.size() == 1);
    CHECK(raw.values[0].first == "x_d1_l1_f_c1");
  }
  SECTION("unknown") { CHECK(parseSolutionText("garbage\n").kind == RawSolution::Kind::Unknown); }
}

TEST_CASE("SCIP solution files", "[solver]") {
  const auto raw = parseSolutionText(
      "solution status: optimal solution found\n"
      "objective value:                                    2\n"
      "x_d1_l1_f_c1                                       1 \t(obj:1)\n");
  CHECK(raw.kind == RawSolution::Kind::Optimal);
  REQUIRE(raw.values.size() == 1);
  CHECK(parseSolutionText("solution status: infeasible\n").kind == RawSolution::Kind::Infeasible);
  CHECK(parseSolutionText("solution status: time limit reached\nno solution available\n").kind ==
        RawSolution::Kind::StoppedWithout);
}

TEST_CASE("solutions are mapped onto the model", "[solver]") {
  const MilpModel m = triangleModel();
  const LpDocument doc = emitLp(m);
  SECTION("objective is recomputed exactly") {
    RawSolution raw{RawSolution::Kind::Optimal, "", {{"x_d1_l1_f_c2", 1.0000001}, {"x_d1_l2_f_c2", 0.999999}}};
    const auto out = interpretSolution(m, doc, raw);
    CHECK(out.status == SolveStatus::Optimal);
    CHECK(out.objective == 2);
    REQUIRE(out.assignment.has_value());
    CHECK((*out.assignment)[*m.find(FlowVar{DemandId(1), {LinkId(1), Direction::Forward}, 2})] == 1);
  }
  SECTION("fractional values are rejected") {
    RawSolution raw{RawSolution::Kind::Optimal, "", {{"x_d1_l1_f_c2", 0.5}}};
    CHECK(interpretSolution(m, doc, raw).status == SolveStatus::SolverError);
  }
  SECTION("unknown names are rejected") {
    RawSolution raw{RawSolution::Kind::Optimal, "", {{"x_d9_l1_f_c2", 1}}};
    CHECK(interpretSolution(m, doc, raw).status == SolveStatus::SolverError);
  }
  SECTION("time limit with and without incumbent") {
    RawSolution with{RawSolution::Kind::StoppedWithIncumbent, "", {{"x_d1_l1_f_c1", 1}, {"x_d1_l2_f_c1", 1}}};
    const auto a = interpretSolution(m, doc, with);
    CHECK(a.status == SolveStatus::Feasible);
    CHECK(a.timedOut);
    CHECK(a.assignment.has_value());
    RawSolution without{RawSolution::Kind::StoppedWithout, "", {}};
    const auto b = interpretSolution(m, doc, without);
    CHECK(b.status == SolveStatus::TimeLimit);
    CHECK_FALSE(b.assignment.has_value());
  }
}

TEST_CASE("solver commands", "[solver]") {
  CHECK(shellQuote("a b'c") == "'a b'\\''c'");
  CHECK(expandTemplate("x {a} {b} {a}", {{"a", "1"}, {"b", "{a}"}}).find("x 1 ") == 0);
  CHECK_THROWS_AS(resolveSolver("gurobi"), InputError);
  CHECK(resolveSolver("cmd:echo {lp_file}").templ == "echo {lp_file}");

  const char* old = std::getenv("RSA_SCIP_PATH");
  const std::string saved = old != nullptr ? old : "";
  ::setenv("RSA_SCIP_PATH", "/nonexistent/scip", 1);
  const auto cmd = resolveSolver("scip");
  REQUIRE(cmd.missingExecutable.has_value());
  CHECK(cmd.missingExecutable->find("RSA_SCIP_PATH") != std::string::npos);
  SolverConfig cfg;
  cfg.solver = "scip";
  const auto out = solve(triangleModel(), cfg);
  CHECK(out.status == SolveStatus::SolverError);
  CHECK_FALSE(out.solverInvoked);
  if (old != nullptr) {
    ::setenv("RSA_SCIP_PATH", saved.c_str(), 1);
  } else {
    ::unsetenv("RSA_SCIP_PATH");
  }
}

TEST_CASE("external solver runs through a command template", "[solver]") {
  const MilpModel m = triangleModel();
  SECTION("incumbent at the time limit") {
    FakeSolver fake("Stopped on time - objective value 2\n 0 x_d1_l1_f_c1 1 0\n 4 x_d1_l2_f_c1 1 0\n", "limit");
    const auto out = fake.run(m, 7);
    CHECK(out.solverInvoked);
    CHECK(out.status == SolveStatus::Feasible);
    CHECK(out.timedOut);
    CHECK(out.objective == 2);
    std::ifstream limit(fake.dir / "limit.txt");
    std::string text;
    limit >> text;
    CHECK(text == "7");
  }
  SECTION("no solution at the time limit") {
    FakeSolver fake("Stopped on time (no integer solution - continuous used) - objective value 0\n", "nolimit");
    CHECK(fake.run(m).status == SolveStatus::TimeLimit);
  }
  SECTION("no solution file") {
    FakeSolver fake("", "nofile");
    const auto out = fake.run(m);
    CHECK(out.status == SolveStatus::SolverError);
    CHECK(out.message.find("fake solver ran") != std::string::npos);
  }
}

TEST_CASE("proven-infeasible models skip the solver", "[solver]") {
  const auto inst = fixture("t1_unreachable");
  const auto t = computeUsefulTriples(inst);
  SolverConfig cfg;
  cfg.solver = "cmd:false";
  const auto out = solve(buildModel(inst, &t, Variant::Trimmed, Mode::Feasibility), cfg);
  CHECK(out.status == SolveStatus::Infeasible);
  CHECK_FALSE(out.solverInvoked);
}

TEST_CASE("CBC solves the golden fixtures", "[solver][cbc]") {
  const auto cfg = rsa::testing::cbcConfig();
  struct Expect {
    const char* name;
    SolveStatus status;
    std::int64_t objective;
  };
  for (const Expect& e : {Expect{"t1", SolveStatus::Optimal, 2}, Expect{"t2", SolveStatus::Optimal, 4},
                          Expect{"t3", SolveStatus::Infeasible, 0}, Expect{"t4", SolveStatus::Optimal, 4}}) {
    const auto inst = fixture(e.name);
    const auto t = computeUsefulTriples(inst);
    for (Variant v : {Variant::Base, Variant::NoTrim, Variant::Trimmed}) {
      INFO(e.name << " " << toString(v));
      const auto out = solve(buildModel(inst, &t, v, Mode::Feasibility), cfg);
      REQUIRE(out.status == e.status);
      if (e.status == SolveStatus::Optimal) CHECK(out.objective == e.objective);
    }
  }
}

TEST_CASE("kept solver files", "[solver][cbc]") {
  auto cfg = rsa::testing::cbcConfig();
  cfg.keepFiles = true;
  cfg.workDir = fs::temp_directory_path() / "rsa-kept";
  const auto out = solve(triangleModel(), cfg);
  REQUIRE(out.status == SolveStatus::Optimal);
  CHECK(fs::exists(out.logPath));
  CHECK(fs::exists(out.logPath.parent_path() / "model.lp"));
  fs::remove_all(cfg.workDir);
}
