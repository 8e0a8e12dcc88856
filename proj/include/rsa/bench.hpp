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

// Runs every (case, variant, solver) cell of a corpus and reports model
// sizes, phase timings and outcomes as CSV and Markdown.

#pragma once

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <filesystem>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <tuple>
#include <vector>

#include "rsa/io.hpp"
#include "rsa/pipeline.hpp"

namespace rsa {

struct BenchCase {
  std::string name;
  std::string kind;        // from meta, "-" when absent
  std::string modulation;  // from meta, "-" when absent
  std::string brokenLink;  // from meta, "-" when absent
  RestorationInstance instance;
};

struct BenchOptions {
  std::vector<Variant> variants{Variant::Base, Variant::NoTrim, Variant::Trimmed};
  std::vector<std::string> solvers{"cbc"};
  unsigned jobs = 1;
  double timeLimitSeconds = 500.0;
  double hardThresholdSeconds = 100.0;
  std::filesystem::path workDir;
};

struct BenchRow {
  std::string caseName, kind, modulation, brokenLink;
  Variant variant = Variant::Trimmed;
  std::string solver;
  std::size_t variables = 0;
  std::size_t constraints = 0;
  double trimSeconds = 0, buildSeconds = 0, solveSeconds = 0;
  std::string status;
  std::optional<std::int64_t> objective;

  double totalSeconds() const { return trimSeconds + buildSeconds + solveSeconds; }
};

inline std::vector<BenchCase> loadCorpus(const std::filesystem::path& dir) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(dir)) throw InputError(dir.string() + ": not a directory");
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir)) {
    const std::string name = e.path().filename().string();
    const bool manifest = name.size() > 14 && name.compare(name.size() - 14, 14, ".manifest.json") == 0;
    if (e.is_regular_file() && e.path().extension() == ".json" && !manifest) files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  std::vector<BenchCase> out;
  for (const auto& f : files) {
    InstanceFile file = loadInstance(f);
    auto text = [&](const char* key) {
      if (!file.meta.contains(key)) return std::string("-");
      const Json& v = file.meta[key];
      return v.is_string() ? v.get<std::string>() : v.dump();
    };
    out.push_back({f.stem().string(), text("kind"), text("modulation"), text("broken_link"), std::move(file.instance)});
  }
  return out;
}

// One cell in feasibility mode.
inline BenchRow runBenchCell(const BenchCase& c, Variant variant, const std::string& solver, const BenchOptions& opt) {
  PipelineOptions p;
  p.variant = variant;
  p.solver.solver = solver;
  p.solver.timeLimitSeconds = opt.timeLimitSeconds;
  p.solver.workDir = opt.workDir;
  const PipelineResult res = runPipeline(c.instance, p);
  BenchRow row;
  row.caseName = c.name;
  row.kind = c.kind;
  row.modulation = c.modulation;
  row.brokenLink = c.brokenLink;
  row.variant = variant;
  row.solver = solver;
  row.variables = res.variables;
  row.constraints = res.constraints;
  row.trimSeconds = res.trimSeconds;
  row.buildSeconds = res.buildSeconds;
  row.solveSeconds = res.solveSeconds;
  row.status = res.timedOut && res.hasSolution() ? "time_limit_feasible" : toString(res.status);
  row.objective = res.objective;
  return row;
}

inline std::vector<BenchRow> runBench(const std::vector<BenchCase>& cases, const BenchOptions& opt) {
  struct Cell {
    std::size_t caseIndex;
    Variant variant;
    std::string solver;
  };
  std::vector<Cell> cells;
  for (std::size_t i = 0; i < cases.size(); ++i) {
    for (Variant v : opt.variants) {
      for (const auto& s : opt.solvers) cells.push_back({i, v, s});
    }
  }
  std::vector<BenchRow> rows(cells.size());
  std::atomic<std::size_t> next{0};
  std::mutex errMutex;
  std::exception_ptr error;
  auto worker = [&] {
    for (std::size_t k; (k = next++) < cells.size();) {
      try {
        rows[k] = runBenchCell(cases[cells[k].caseIndex], cells[k].variant, cells[k].solver, opt);
      } catch (...) {
        std::lock_guard<std::mutex> lock(errMutex);
        if (!error) error = std::current_exception();
      }
    }
  };
  const unsigned jobs = std::max(1u, std::min<unsigned>(opt.jobs, static_cast<unsigned>(cells.size())));
  std::vector<std::thread> pool;
  for (unsigned j = 1; j < jobs; ++j) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);

  std::stable_sort(rows.begin(), rows.end(), [](const BenchRow& a, const BenchRow& b) {
    return std::tie(a.caseName, a.variant, a.solver) < std::tie(b.caseName, b.variant, b.solver);
  });
  return rows;
}

inline constexpr const char* kBenchCsvHeader =
    "case,kind,modulation,broken_link,variant,solver,variables,constraints,trim_seconds,build_seconds,"
    "solve_seconds,status,objective";

namespace detail {

inline std::string csvField(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) out += ch == '"' ? std::string("\"\"") : std::string(1, ch);
  return out + "\"";
}

inline std::string fixed3(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", x);
  return buf;
}

}  // namespace detail

// With `timing` false the three timing columns are left empty, which makes
// the output byte-comparable across runs.
inline std::string benchCsv(const std::vector<BenchRow>& rows, bool timing = true) {
  using detail::csvField;
  std::ostringstream os;
  os << kBenchCsvHeader << '\n';
  for (const auto& r : rows) {
    auto t = [&](double x) { return timing ? detail::fixed3(x) : std::string(); };
    os << csvField(r.caseName) << ',' << csvField(r.kind) << ',' << csvField(r.modulation) << ','
       << csvField(r.brokenLink) << ',' << toString(r.variant) << ',' << csvField(r.solver) << ',' << r.variables
       << ',' << r.constraints << ',' << t(r.trimSeconds) << ',' << t(r.buildSeconds) << ',' << t(r.solveSeconds)
       << ',' << r.status << ',' << (r.objective ? std::to_string(*r.objective) : std::string()) << '\n';
  }
  return os.str();
}

// Per-group means (group = kind and modulation): number of cases, variables
// per variant and total runtime per (solver, variant). A second table
// repeats the aggregation without hard cases, i.e. cases where some cell
// exceeded the threshold or did not finish.
inline std::string benchMarkdown(const std::vector<BenchRow>& rows, const BenchOptions& opt) {
  std::set<std::string> hard;
  for (const auto& r : rows) {
    if (r.totalSeconds() > opt.hardThresholdSeconds || r.status == "time_limit" || r.status == "time_limit_feasible" ||
        r.status == "solver_error") {
      hard.insert(r.caseName);
    }
  }
  std::vector<Variant> variants = opt.variants;
  std::vector<std::string> solvers = opt.solvers;

  auto table = [&](bool excludeHard) {
    struct Acc {
      std::set<std::string> cases;
      std::map<Variant, std::pair<double, std::size_t>> vars;
      std::map<std::pair<std::string, Variant>, std::pair<double, std::size_t>> time;
    };
    std::map<std::string, Acc> groups;
    for (const auto& r : rows) {
      if (excludeHard && hard.count(r.caseName) != 0) continue;
      Acc& a = groups[r.kind + " / " + r.modulation];
      a.cases.insert(r.caseName);
      auto& v = a.vars[r.variant];
      v.first += static_cast<double>(r.variables);
      ++v.second;
      auto& t = a.time[{r.solver, r.variant}];
      t.first += r.totalSeconds();
      ++t.second;
    }
    std::ostringstream os;
    os << "| group | #tests |";
    for (Variant v : variants) os << " vars " << toString(v) << " |";
    for (const auto& s : solvers) {
      for (Variant v : variants) os << " s " << s << " " << toString(v) << " |";
    }
    os << "\n|---|---|";
    for (std::size_t i = 0; i < variants.size() * (1 + solvers.size()); ++i) os << "---|";
    os << '\n';
    auto mean = [](const std::pair<double, std::size_t>& p) { return p.second == 0 ? 0.0 : p.first / static_cast<double>(p.second); };
    for (const auto& [name, a] : groups) {
      os << "| " << name << " | " << a.cases.size() << " |";
      for (Variant v : variants) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.0f", a.vars.count(v) ? mean(a.vars.at(v)) : 0.0);
        os << ' ' << buf << " |";
      }
      for (const auto& s : solvers) {
        for (Variant v : variants) {
          const auto it = a.time.find({s, v});
          os << ' ' << detail::fixed3(it == a.time.end() ? 0.0 : mean(it->second)) << " |";
        }
      }
      os << '\n';
    }
    return os.str();
  };

  std::ostringstream os;
  os << "## All cases\n\n" << table(false) << '\n';
  os << "## Excluding hard cases (> " << detail::fixed3(opt.hardThresholdSeconds) << " s or unfinished)\n\n";
  os << "Excluded: " << hard.size() << " case(s)";
  if (!hard.empty()) {
    os << " (";
    bool first = true;
    for (const auto& h : hard) {
      os << (first ? "" : ", ") << h;
      first = false;
    }
    os << ')';
  }
  os << "\n\n" << table(true) << '\n';
  os << "## Per case\n\n| case | variant | solver | variables | constraints | seconds | status | objective |\n"
        "|---|---|---|---|---|---|---|---|\n";
  for (const auto& r : rows) {
    os << "| " << r.caseName << " | " << toString(r.variant) << " | " << r.solver << " | " << r.variables << " | "
       << r.constraints << " | " << detail::fixed3(r.totalSeconds()) << " | " << r.status << " | "
       << (r.objective ? std::to_string(*r.objective) : "-") << " |\n";
  }
  return os.str();
}

}  // namespace rsa
