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

#include <cstdlib>
#include <sstream>
#include <string>
#include <vector>

#include "rsa/milp_model.hpp"

namespace rsa {

// Longest identifier accepted by common LP readers.
inline constexpr std::size_t kMaxLpNameLength = 255;

struct LpDocument {
  std::string text;
  std::vector<std::string> variableNames;  // as written, indexed by VarIndex
  bool aliased = false;
};

namespace detail {

inline void writeTerms(std::ostringstream& os, const std::vector<Term>& terms, std::int64_t denominator,
                       const std::vector<std::string>& names) {
  if (terms.empty()) {
    os << " 0";
    return;
  }
  for (std::size_t i = 0; i < terms.size(); ++i) {
    if (i > 0 && i % 8 == 0) os << "\n  ";
    const std::int64_t c = terms[i].coef;
    const std::int64_t mag = c < 0 ? -c : c;
    os << (c < 0 ? " - " : (i == 0 ? " " : " + "));
    if (mag != denominator) os << formatFixed(mag, denominator) << ' ';
    os << names[terms[i].var];
  }
}

}  // namespace detail

inline LpDocument emitLp(const MilpModel& model) {
  LpDocument doc;
  const auto& vars = model.variables();
  doc.variableNames.reserve(vars.size());
  for (const auto& key : vars) doc.variableNames.push_back(variableName(key));
  for (const auto& name : doc.variableNames) doc.aliased = doc.aliased || name.size() > kMaxLpNameLength;
  for (const auto& row : model.constraints()) doc.aliased = doc.aliased || row.name.size() > kMaxLpNameLength;

  std::vector<std::string> rowNames;
  rowNames.reserve(model.constraints().size());
  for (std::size_t i = 0; i < model.constraints().size(); ++i) {
    rowNames.push_back(doc.aliased ? "r" + std::to_string(i) : model.constraints()[i].name);
  }

  std::ostringstream os;
  os << "\\ rsa-restore " << kToolVersion << " variant=" << toString(model.variant)
     << " mode=" << toString(model.mode) << " variables=" << vars.size()
     << " constraints=" << model.constraints().size() << '\n';
  if (model.provenInfeasible()) os << "\\ proven infeasible: " << *model.provenInfeasible() << '\n';
  if (doc.aliased) {
    for (std::size_t i = 0; i < vars.size(); ++i) {
      os << "\\ alias v" << i << " = " << doc.variableNames[i] << '\n';
      doc.variableNames[i] = "v" + std::to_string(i);
    }
    for (std::size_t i = 0; i < model.constraints().size(); ++i) {
      os << "\\ alias r" << i << " = " << model.constraints()[i].name << '\n';
    }
  }

  os << "Minimize\n obj:";
  detail::writeTerms(os, model.objective().terms, 1, doc.variableNames);
  os << "\nSubject To\n";
  for (std::size_t i = 0; i < model.constraints().size(); ++i) {
    const auto& row = model.constraints()[i];
    os << ' ' << rowNames[i] << ':';
    detail::writeTerms(os, row.terms, row.denominator, doc.variableNames);
    switch (row.relation) {
      case Relation::LessEqual: os << " <= "; break;
      case Relation::Equal: os << " = "; break;
      case Relation::GreaterEqual: os << " >= "; break;
    }
    os << formatFixed(row.rhs, row.denominator) << '\n';
  }
  if (!vars.empty()) {
    os << "Binary\n";
    for (const auto& name : doc.variableNames) os << ' ' << name << '\n';
  }
  os << "End\n";
  doc.text = os.str();
  return doc;
}

inline std::string emitLpText(const MilpModel& model) { return emitLp(model).text; }

}  // namespace rsa
