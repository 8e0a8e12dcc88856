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

// External MILP solver driver: writes the model as an LP file, runs the
// solver as a subprocess and reads the solution file back.
//
// Solvers are described by command templates with the placeholders
// {lp_file}, {sol_file} and {time_limit}. Built-in templates exist for CBC
// and SCIP; their executables can be overridden with RSA_CBC_PATH and
// RSA_SCIP_PATH.

#pragma once

#include <sys/wait.h>
#include <unistd.h>

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "rsa/lp_format.hpp"

namespace rsa {

struct SolverConfig {
  // "cbc", "scip" or "cmd:<template>".
  std::string solver = "cbc";
  double timeLimitSeconds = 500.0;
  std::filesystem::path workDir;  // empty: system temp directory
  bool keepFiles = false;
};

enum class SolveStatus { Optimal, Feasible, Infeasible, TimeLimit, SolverError };

inline const char* toString(SolveStatus s) {
  switch (s) {
    case SolveStatus::Optimal: return "optimal";
    case SolveStatus::Feasible: return "feasible";
    case SolveStatus::Infeasible: return "infeasible";
    case SolveStatus::TimeLimit: return "time_limit";
    case SolveStatus::SolverError: return "solver_error";
  }
  return "?";
}

struct SolveOutcome {
  SolveStatus status = SolveStatus::SolverError;
  // Indexed by VarIndex; present iff status is Optimal or Feasible.
  std::optional<std::vector<std::uint8_t>> assignment;
  // Objective recomputed exactly from the assignment.
  std::int64_t objective = 0;
  double wallSeconds = 0.0;
  bool solverInvoked = false;
  bool timedOut = false;  // Feasible because the time limit hit with an incumbent
  std::filesystem::path logPath;  // empty unless files are kept
  std::string message;
};

// Parsed solution file, before mapping onto a model.
struct RawSolution {
  enum class Kind { Optimal, Infeasible, StoppedWithIncumbent, StoppedWithout, Unknown } kind = Kind::Unknown;
  std::string statusLine;
  std::vector<std::pair<std::string, double>> values;
};

inline std::string shellQuote(const std::string& s) {
  std::string out = "'";
  for (char ch : s) {
    if (ch == '\'') {
      out += "'\\''";
    } else {
      out.push_back(ch);
    }
  }
  return out + "'";
}

inline std::optional<std::filesystem::path> findExecutable(const std::string& name) {
  namespace fs = std::filesystem;
  if (name.find('/') != std::string::npos) {
    if (fs::exists(name) && ::access(name.c_str(), X_OK) == 0) return fs::path(name);
    return std::nullopt;
  }
  const char* path = std::getenv("PATH");
  if (path == nullptr) return std::nullopt;
  std::stringstream ss(path);
  std::string dir;
  while (std::getline(ss, dir, ':')) {
    if (dir.empty()) continue;
    fs::path cand = fs::path(dir) / name;
    if (fs::exists(cand) && ::access(cand.c_str(), X_OK) == 0) return cand;
  }
  return std::nullopt;
}

struct SolverCommand {
  std::string templ;
  std::string identity;
  std::optional<std::string> missingExecutable;  // actionable message when unusable
};

inline SolverCommand resolveSolver(const std::string& solver) {
  auto builtin = [](const char* envVar, const char* fallback, const std::string& args,
                    const std::string& label) -> SolverCommand {
    const char* env = std::getenv(envVar);
    const std::string exe = env != nullptr && *env != '\0' ? env : fallback;
    auto found = findExecutable(exe);
    if (!found) {
      return {"", label, label + " executable '" + exe + "' not found; put it on PATH or set " + envVar};
    }
    return {shellQuote(found->string()) + " " + args, label + ":" + found->string(), std::nullopt};
  };
  if (solver == "cbc") {
    return builtin("RSA_CBC_PATH", "cbc", "{lp_file} sec {time_limit} solve solu {sol_file}", "cbc");
  }
  if (solver == "scip") {
    return builtin("RSA_SCIP_PATH", "scip",
                   "-c 'read {lp_file}' -c 'set limits time {time_limit}' -c optimize "
                   "-c 'write solution {sol_file}' -c quit",
                   "scip");
  }
  if (solver.rfind("cmd:", 0) == 0) return {solver.substr(4), solver, std::nullopt};
  throw InputError("unknown solver '" + solver + "' (expected cbc, scip or cmd:<template>)");
}

inline std::string expandTemplate(std::string templ, const std::unordered_map<std::string, std::string>& vars) {
  for (const auto& [key, value] : vars) {
    const std::string ph = "{" + key + "}";
    for (std::size_t pos = templ.find(ph); pos != std::string::npos; pos = templ.find(ph, pos + value.size())) {
      templ.replace(pos, ph.size(), value);
    }
  }
  return templ;
}

// Reads either a CBC "solu" file or a SCIP "write solution" file.
inline RawSolution parseSolutionText(const std::string& text) {
  RawSolution sol;
  std::istringstream in(text);
  std::string line;
  auto lower = [](std::string s) {
    for (char& ch : s) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
    return s;
  };
  bool scip = false;
  bool first = true;
  while (std::getline(in, line)) {
    if (first) {
      first = false;
      sol.statusLine = line;
      const std::string l = lower(line);
      if (l.rfind("solution status:", 0) == 0) {
        scip = true;
        if (l.find("optimal") != std::string::npos) {
          sol.kind = RawSolution::Kind::Optimal;
        } else if (l.find("infeasible") != std::string::npos) {
          sol.kind = RawSolution::Kind::Infeasible;
        } else if (l.find("limit") != std::string::npos || l.find("interrupt") != std::string::npos) {
          sol.kind = RawSolution::Kind::StoppedWithIncumbent;
        }
        continue;
      }
      if (l.rfind("optimal", 0) == 0) {
        sol.kind = RawSolution::Kind::Optimal;
      } else if (l.rfind("infeasible", 0) == 0 || l.rfind("integer infeasible", 0) == 0) {
        sol.kind = RawSolution::Kind::Infeasible;
      } else if (l.rfind("stopped", 0) == 0) {
        sol.kind = l.find("no integer solution") != std::string::npos ? RawSolution::Kind::StoppedWithout
                                                                      : RawSolution::Kind::StoppedWithIncumbent;
      }
      if (sol.kind == RawSolution::Kind::Infeasible) return sol;
      continue;
    }
    std::istringstream ls(line);
    if (scip) {
      const std::string l = lower(line);
      if (l.rfind("objective value:", 0) == 0) continue;
      if (l.rfind("no solution available", 0) == 0) {
        if (sol.kind == RawSolution::Kind::StoppedWithIncumbent) sol.kind = RawSolution::Kind::StoppedWithout;
        continue;
      }
      std::string name;
      double value = 0;
      if (ls >> name >> value) sol.values.emplace_back(name, value);
      continue;
    }
    std::string tok;
    if (!(ls >> tok)) continue;
    if (tok == "**") ls >> tok;  // CBC flags infeasible rows/cols with "**"
    std::string name;
    double value = 0;
    if (ls >> name >> value) sol.values.emplace_back(name, value);
  }
  return sol;
}

// Maps a raw solution onto a model. Values within 0.01 of 0 or 1 are
// rounded; anything else is rejected.
inline SolveOutcome interpretSolution(const MilpModel& model, const LpDocument& doc, const RawSolution& raw) {
  SolveOutcome out;
  switch (raw.kind) {
    case RawSolution::Kind::Infeasible: out.status = SolveStatus::Infeasible; return out;
    case RawSolution::Kind::StoppedWithout: out.status = SolveStatus::TimeLimit; out.timedOut = true; return out;
    case RawSolution::Kind::Unknown:
      out.status = SolveStatus::SolverError;
      out.message = "unrecognised solution status: '" + raw.statusLine + "'";
      return out;
    case RawSolution::Kind::Optimal: out.status = SolveStatus::Optimal; break;
    case RawSolution::Kind::StoppedWithIncumbent:
      out.status = SolveStatus::Feasible;
      out.timedOut = true;
      break;
  }
  std::unordered_map<std::string, VarIndex> byName;
  for (VarIndex i = 0; i < doc.variableNames.size(); ++i) byName.emplace(doc.variableNames[i], i);
  std::vector<std::uint8_t> values(model.variables().size(), 0);
  for (const auto& [name, value] : raw.values) {
    auto it = byName.find(name);
    if (it == byName.end()) {
      out.status = SolveStatus::SolverError;
      out.message = "solution names undeclared variable '" + name + "'";
      return out;
    }
    if (value > 0.01 && value < 0.99) {
      out.status = SolveStatus::SolverError;
      out.message = "non-integral value " + std::to_string(value) + " for " + name;
      return out;
    }
    if (value < -0.01 || value > 1.01) {
      out.status = SolveStatus::SolverError;
      out.message = "value " + std::to_string(value) + " outside [0,1] for " + name;
      return out;
    }
    values[it->second] = value >= 0.5 ? 1 : 0;
  }
  std::int64_t obj = 0;
  for (const Term& t : model.objective().terms) obj += t.coef * values[t.var];
  out.objective = obj;
  out.assignment = std::move(values);
  return out;
}

inline SolveOutcome solve(const MilpModel& model, const SolverConfig& config) {
  namespace fs = std::filesystem;
  using Clock = std::chrono::steady_clock;
  if (!(config.timeLimitSeconds > 0)) throw InputError("time limit must be positive");

  if (model.provenInfeasible()) {
    SolveOutcome out;
    out.status = SolveStatus::Infeasible;
    out.message = *model.provenInfeasible();
    return out;
  }

  const SolverCommand cmd = resolveSolver(config.solver);
  if (cmd.missingExecutable) {
    SolveOutcome out;
    out.status = SolveStatus::SolverError;
    out.message = *cmd.missingExecutable;
    return out;
  }

  static std::atomic<std::uint64_t> counter{0};
  const fs::path base = config.workDir.empty() ? fs::temp_directory_path() / "rsa-restore" : config.workDir;
  const fs::path dir = base / ("solve-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
  fs::create_directories(dir);
  const fs::path lpFile = dir / "model.lp";
  const fs::path solFile = dir / "model.sol";
  const fs::path logFile = dir / "solver.log";

  const LpDocument doc = emitLp(model);
  {
    std::ofstream f(lpFile);
    f << doc.text;
    if (!f) throw std::runtime_error("cannot write " + lpFile.string());
  }

  std::ostringstream limit;
  limit << config.timeLimitSeconds;
  const std::string command = expandTemplate(cmd.templ, {{"lp_file", shellQuote(lpFile.string())},
                                                        {"sol_file", shellQuote(solFile.string())},
                                                        {"time_limit", limit.str()}}) +
                              " > " + shellQuote(logFile.string()) + " 2>&1";

  const auto start = Clock::now();
  const int rc = std::system(command.c_str());
  const double wall = std::chrono::duration<double>(Clock::now() - start).count();

  auto readFile = [](const fs::path& p) {
    std::ifstream f(p);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
  };

  SolveOutcome out;
  const bool exited = rc != -1 && WIFEXITED(rc);
  if (fs::exists(solFile)) {
    out = interpretSolution(model, doc, parseSolutionText(readFile(solFile)));
  } else {
    out.status = SolveStatus::SolverError;
    out.message = "solver wrote no solution file (exit status " +
                  std::to_string(exited ? WEXITSTATUS(rc) : -1) + ")";
  }
  out.solverInvoked = true;
  out.wallSeconds = wall;
  if (out.status == SolveStatus::SolverError) {
    std::string log = readFile(logFile);
    if (log.size() > 2000) log = log.substr(log.size() - 2000);
    out.message += "\n--- solver log (tail) ---\n" + log;
  }
  if (config.keepFiles) {
    out.logPath = logFile;
  } else {
    std::error_code ec;
    fs::remove_all(dir, ec);
  }
  return out;
}

}  // namespace rsa
