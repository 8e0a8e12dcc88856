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

// Flow-based MILP for routing and spectrum allocation.
//
// Variables x[d, l->, c] are binary: demand d occupies slot c on the directed
// copy l-> of link l. Every demand is a flow of value w_d leaving s_d, split
// across w_d colors; per-color conservation plus the contiguity rows force
// the flow onto a single path occupying one contiguous slot range.
//
// Row families:
//   flow      conservation of each color at inner nodes
//   src_out   out-flow of s_d equals w_d (w_d * y_d in max-subset mode)
//   src_in    no flow enters s_d
//   reach     sum of len(l) * x <= r_d * w_d
//   uni       each (link, color) used by at most one demand in one direction
//   ctg_a/b   a rising edge at a first-color candidate c opens w_d slots
//   ctg_c     slots that cannot be first colors never start a range
//   fix       Base variant only: occupied slots pinned to zero
//
// A template term whose variable does not exist is the constant 0.

#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <variant>
#include <vector>

#include "rsa/network.hpp"
#include "rsa/trimming.hpp"

namespace rsa {

enum class Variant { Base, NoTrim, Trimmed };
enum class Mode { Feasibility, MaxSubset };
enum class Direction : std::uint8_t { Forward, Backward };  // u->v, v->u

inline const char* toString(Variant v) {
  switch (v) {
    case Variant::Base: return "base";
    case Variant::NoTrim: return "notrim";
    case Variant::Trimmed: return "trimmed";
  }
  return "?";
}

inline const char* toString(Mode m) {
  return m == Mode::Feasibility ? "feasibility" : "maxsubset";
}

inline Variant parseVariant(const std::string& s) {
  if (s == "base") return Variant::Base;
  if (s == "notrim") return Variant::NoTrim;
  if (s == "trimmed") return Variant::Trimmed;
  throw InputError("unknown variant '" + s + "' (expected base|notrim|trimmed)");
}

inline Mode parseMode(const std::string& s) {
  if (s == "feasibility") return Mode::Feasibility;
  if (s == "maxsubset") return Mode::MaxSubset;
  throw InputError("unknown mode '" + s + "' (expected feasibility|maxsubset)");
}

struct DirectedLinkRef {
  LinkId link;
  Direction direction = Direction::Forward;
  friend auto operator<=>(const DirectedLinkRef&, const DirectedLinkRef&) = default;
};

struct FlowVar {
  DemandId demand;
  DirectedLinkRef arc;
  Color color = 0;
  friend auto operator<=>(const FlowVar&, const FlowVar&) = default;
};

struct SelectVar {
  DemandId demand;
  friend auto operator<=>(const SelectVar&, const SelectVar&) = default;
};

using VariableKey = std::variant<FlowVar, SelectVar>;

inline std::string variableName(const VariableKey& key) {
  if (const auto* f = std::get_if<FlowVar>(&key)) {
    return "x_d" + std::to_string(f->demand.value) + "_l" + std::to_string(f->arc.link.value) +
           (f->arc.direction == Direction::Forward ? "_f" : "_b") + "_c" + std::to_string(f->color);
  }
  return "y_d" + std::to_string(std::get<SelectVar>(key).demand.value);
}

// Inverse of variableName.
inline std::optional<VariableKey> parseVariableName(const std::string& name) {
  auto readNumber = [&](std::size_t& pos, std::uint64_t& out) {
    const std::size_t start = pos;
    out = 0;
    while (pos < name.size() && name[pos] >= '0' && name[pos] <= '9') {
      out = out * 10 + static_cast<std::uint64_t>(name[pos] - '0');
      ++pos;
    }
    return pos > start && (pos - start == 1 || name[start] != '0');
  };
  auto expect = [&](std::size_t& pos, const char* lit) {
    const std::string s(lit);
    if (name.compare(pos, s.size(), s) != 0) return false;
    pos += s.size();
    return true;
  };
  std::size_t pos = 0;
  std::uint64_t d = 0;
  if (expect(pos, "y_d")) {
    if (!readNumber(pos, d) || pos != name.size()) return std::nullopt;
    return SelectVar{DemandId(d)};
  }
  std::uint64_t l = 0;
  std::uint64_t c = 0;
  if (!expect(pos, "x_d") || !readNumber(pos, d) || !expect(pos, "_l") || !readNumber(pos, l)) {
    return std::nullopt;
  }
  Direction dir = Direction::Forward;
  if (expect(pos, "_f")) {
    dir = Direction::Forward;
  } else if (expect(pos, "_b")) {
    dir = Direction::Backward;
  } else {
    return std::nullopt;
  }
  if (!expect(pos, "_c") || !readNumber(pos, c) || pos != name.size() || c == 0 || c > 1'000'000) {
    return std::nullopt;
  }
  return FlowVar{DemandId(d), {LinkId(l), dir}, static_cast<Color>(c)};
}

using VarIndex = std::size_t;

enum class Relation { LessEqual, Equal, GreaterEqual };

enum class ConstraintFamily {
  Conservation,
  SourceOut,
  SourceIn,
  Reach,
  Unicolor,
  ContiguityA,
  ContiguityB,
  ContiguityC,
  FixedZero,
};

inline constexpr ConstraintFamily kAllFamilies[] = {
    ConstraintFamily::Conservation, ConstraintFamily::SourceOut,   ConstraintFamily::SourceIn,
    ConstraintFamily::Reach,        ConstraintFamily::Unicolor,    ConstraintFamily::ContiguityA,
    ConstraintFamily::ContiguityB,  ConstraintFamily::ContiguityC, ConstraintFamily::FixedZero,
};

inline const char* familyTag(ConstraintFamily f) {
  switch (f) {
    case ConstraintFamily::Conservation: return "flow";
    case ConstraintFamily::SourceOut: return "src_out";
    case ConstraintFamily::SourceIn: return "src_in";
    case ConstraintFamily::Reach: return "reach";
    case ConstraintFamily::Unicolor: return "uni";
    case ConstraintFamily::ContiguityA: return "ctg_a";
    case ConstraintFamily::ContiguityB: return "ctg_b";
    case ConstraintFamily::ContiguityC: return "ctg_c";
    case ConstraintFamily::FixedZero: return "fix";
  }
  return "?";
}

struct Term {
  VarIndex var = 0;
  std::int64_t coef = 0;
  friend bool operator==(const Term&, const Term&) = default;
};

// sum(coef * x) / denominator  REL  rhs / denominator
struct LinearConstraint {
  std::string name;  // provenance tag, unique within a model
  ConstraintFamily family = ConstraintFamily::Conservation;
  std::vector<Term> terms;
  Relation relation = Relation::Equal;
  std::int64_t rhs = 0;
  std::int64_t denominator = 1;
};

struct LinearExpression {
  std::vector<Term> terms;
};

class MilpModel {
 public:
  Variant variant = Variant::Trimmed;
  Mode mode = Mode::Feasibility;

  const std::vector<VariableKey>& variables() const { return variables_; }
  const std::vector<LinearConstraint>& constraints() const { return constraints_; }
  const LinearExpression& objective() const { return objective_; }

  // Set when a row reduced to an unsatisfiable constant, e.g. a demand whose
  // source has no outgoing variable at all. No solver call is needed then.
  const std::optional<std::string>& provenInfeasible() const { return provenInfeasible_; }

  std::optional<VarIndex> find(const VariableKey& key) const {
    auto it = index_.find(key);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  std::size_t flowVariableCount() const { return flowCount_; }
  std::size_t selectVariableCount() const { return variables_.size() - flowCount_; }

  VarIndex addVariable(const VariableKey& key) {
    auto [it, inserted] = index_.emplace(key, variables_.size());
    if (!inserted) throw std::logic_error("duplicate variable " + variableName(key));
    variables_.push_back(key);
    if (std::holds_alternative<FlowVar>(key)) ++flowCount_;
    return it->second;
  }

  void addConstraint(LinearConstraint row) {
    // Merge duplicate terms and drop zeros so every stored coefficient is nonzero.
    std::map<VarIndex, std::int64_t> merged;
    for (const Term& t : row.terms) {
      if (t.var >= variables_.size()) throw std::logic_error("row " + row.name + " references undeclared variable");
      merged[t.var] += t.coef;
    }
    row.terms.clear();
    for (auto [v, c] : merged) {
      if (c != 0) row.terms.push_back({v, c});
    }
    if (row.terms.empty()) {
      const bool holds = row.relation == Relation::Equal          ? row.rhs == 0
                         : row.relation == Relation::LessEqual    ? 0 <= row.rhs
                                                                  : 0 >= row.rhs;
      if (!holds && !provenInfeasible_) provenInfeasible_ = "row " + row.name + " reduces to an unsatisfiable constant";
      return;
    }
    constraints_.push_back(std::move(row));
  }

  void setObjective(LinearExpression e) { objective_ = std::move(e); }

 private:
  std::vector<VariableKey> variables_;
  std::map<VariableKey, VarIndex> index_;
  std::vector<LinearConstraint> constraints_;
  LinearExpression objective_;
  std::optional<std::string> provenInfeasible_;
  std::size_t flowCount_ = 0;
};

// How first-color candidates gate the contiguity rows.
enum class ContiguityRule {
  // A rising edge x[c] - x[c-1] at any candidate c opens the full range; the
  // previous slot is compared whenever its variable exists.
  RisingEdge,
  // Literal form: ctg_a only when c-1 is itself a candidate, ctg_b otherwise.
  // Over-constrains trimmed models of width >= 3 when candidates are not
  // consecutive; kept for regression comparison.
  CandidateNeighbour,
};

struct BuildOptions {
  ContiguityRule contiguity = ContiguityRule::RisingEdge;
};

namespace detail {

struct DemandArcs {
  // colors present per (link position, direction)
  std::vector<std::vector<Color>> colors[2];
};

inline std::uint64_t packKey(std::size_t demandPos, std::size_t linkPos, Direction dir, Color c) {
  return (static_cast<std::uint64_t>(demandPos) << 44) | (static_cast<std::uint64_t>(linkPos) << 20) |
         (static_cast<std::uint64_t>(dir) << 19) | static_cast<std::uint64_t>(c);
}

}  // namespace detail

inline MilpModel buildModel(const RestorationInstance& inst, const UsefulTripleSet* triples, Variant variant,
                            Mode mode, BuildOptions options = {}) {
  const OpticalNetwork& net = inst.network;
  const int slots = net.slotCount();
  if (variant == Variant::Trimmed && triples == nullptr) {
    throw InputError("the trimmed variant needs a useful-triple set");
  }
  if (net.links().size() >= (1u << 24) || inst.demands.size() >= (1u << 19) || slots >= (1 << 19)) {
    throw InputError("instance too large for the model builder");
  }
  if (variant == Variant::Trimmed && mode == Mode::MaxSubset) {
    std::string bad;
    for (const Demand& d : inst.demands) {
      if (triples->nonReroutable.count(d.id) != 0) bad += (bad.empty() ? "" : ", ") + std::to_string(d.id.value);
    }
    if (!bad.empty()) {
      throw InputError("non re-routable demands must be removed before a max-subset build: " + bad);
    }
  }

  MilpModel model;
  model.variant = variant;
  model.mode = mode;

  const std::size_t nLinks = net.links().size();
  std::unordered_map<std::uint64_t, VarIndex> lookup;
  std::vector<detail::DemandArcs> arcs(inst.demands.size());

  auto hasVariable = [&](std::size_t di, std::size_t li, Color c) {
    const Demand& d = inst.demands[di];
    const Link& l = net.link(li);
    switch (variant) {
      case Variant::Base: return true;
      case Variant::NoTrim: return net.available(li).contains(c);
      case Variant::Trimmed: return triples->isUseful(d.id, l.id, c);
    }
    return false;
  };

  for (std::size_t di = 0; di < inst.demands.size(); ++di) {
    const Demand& d = inst.demands[di];
    for (int dir = 0; dir < 2; ++dir) arcs[di].colors[dir].resize(nLinks);
    for (std::size_t li = 0; li < nLinks; ++li) {
      const Link& l = net.link(li);
      for (int dir = 0; dir < 2; ++dir) {
        const auto direction = static_cast<Direction>(dir);
        for (Color c = 1; c <= slots; ++c) {
          if (!hasVariable(di, li, c)) continue;
          const VarIndex v = model.addVariable(FlowVar{d.id, {l.id, direction}, c});
          lookup.emplace(detail::packKey(di, li, direction, c), v);
          arcs[di].colors[dir][li].push_back(c);
        }
      }
    }
  }

  auto var = [&](std::size_t di, std::size_t li, Direction dir, Color c) -> std::optional<VarIndex> {
    if (c < 1 || c > slots) return std::nullopt;
    auto it = lookup.find(detail::packKey(di, li, dir, c));
    if (it == lookup.end()) return std::nullopt;
    return it->second;
  };

  std::vector<VarIndex> selectVars;
  if (mode == Mode::MaxSubset) {
    for (const Demand& d : inst.demands) selectVars.push_back(model.addVariable(SelectVar{d.id}));
  }

  // Objective.
  {
    LinearExpression obj;
    for (VarIndex v = 0; v < model.variables().size(); ++v) {
      if (std::holds_alternative<FlowVar>(model.variables()[v])) obj.terms.push_back({v, 1});
    }
    if (mode == Mode::MaxSubset) {
      // Penalty must exceed the largest possible flow total. Unicolor rows cap
      // that total at the number of undirected triples, so one more suffices.
      std::int64_t bound = 0;
      if (variant == Variant::Trimmed) {
        bound = static_cast<std::int64_t>(triples->useful.size());
      } else {
        bound = static_cast<std::int64_t>(model.flowVariableCount() / 2);
      }
      for (VarIndex y : selectVars) obj.terms.push_back({y, -(bound + 1)});
    }
    model.setObjective(std::move(obj));
  }

  const std::string dirTag[2] = {"f", "b"};

  for (std::size_t di = 0; di < inst.demands.size(); ++di) {
    const Demand& d = inst.demands[di];
    const std::string dTag = "d" + std::to_string(d.id.value);

    // Conservation, keyed by (color, node).
    std::map<std::pair<Color, NodeIndex>, std::vector<Term>> div;
    std::vector<Term> srcOut;
    std::vector<Term> srcIn;
    std::vector<Term> reach;
    for (std::size_t li = 0; li < nLinks; ++li) {
      const Link& l = net.link(li);
      for (int dir = 0; dir < 2; ++dir) {
        const NodeIndex from = dir == 0 ? l.u : l.v;
        const NodeIndex to = dir == 0 ? l.v : l.u;
        for (Color c : arcs[di].colors[dir][li]) {
          const VarIndex v = *var(di, li, static_cast<Direction>(dir), c);
          if (from != d.source && from != d.target) div[{c, from}].push_back({v, 1});
          if (to != d.source && to != d.target) div[{c, to}].push_back({v, -1});
          if (from == d.source) srcOut.push_back({v, 1});
          if (to == d.source) srcIn.push_back({v, 1});
          reach.push_back({v, l.length.units()});
        }
      }
    }
    for (auto& [key, terms] : div) {
      model.addConstraint({"flow_" + dTag + "_c" + std::to_string(key.first) + "_n" + std::to_string(key.second),
                           ConstraintFamily::Conservation, std::move(terms), Relation::Equal, 0, 1});
    }
    if (mode == Mode::MaxSubset) {
      srcOut.push_back({selectVars[di], -d.width});
      model.addConstraint({"src_out_" + dTag, ConstraintFamily::SourceOut, std::move(srcOut), Relation::Equal, 0, 1});
    } else {
      model.addConstraint(
          {"src_out_" + dTag, ConstraintFamily::SourceOut, std::move(srcOut), Relation::Equal, d.width, 1});
    }
    if (!srcIn.empty()) {
      model.addConstraint({"src_in_" + dTag, ConstraintFamily::SourceIn, std::move(srcIn), Relation::Equal, 0, 1});
    }
    model.addConstraint({"reach_" + dTag, ConstraintFamily::Reach, std::move(reach), Relation::LessEqual,
                         d.reach.units() * d.width, Length::kUnitsPerKm});
  }

  // Unicolor.
  for (std::size_t li = 0; li < nLinks; ++li) {
    const Link& l = net.link(li);
    for (Color c = 1; c <= slots; ++c) {
      std::vector<Term> terms;
      for (std::size_t di = 0; di < inst.demands.size(); ++di) {
        for (int dir = 0; dir < 2; ++dir) {
          if (auto v = var(di, li, static_cast<Direction>(dir), c)) terms.push_back({*v, 1});
        }
      }
      if (terms.size() < 2) continue;
      model.addConstraint({"uni_l" + std::to_string(l.id.value) + "_c" + std::to_string(c),
                           ConstraintFamily::Unicolor, std::move(terms), Relation::LessEqual, 1, 1});
    }
  }

  // Contiguity. Vacuous for width 1.
  for (std::size_t di = 0; di < inst.demands.size(); ++di) {
    const Demand& d = inst.demands[di];
    if (d.width == 1) continue;
    const int w = d.width;
    for (std::size_t li = 0; li < nLinks; ++li) {
      const Link& l = net.link(li);
      const ColorSet& avail = net.available(li);
      auto isCandidate = [&](Color c) {
        switch (variant) {
          case Variant::Base: return c >= 1 && c <= slots;
          case Variant::NoTrim: return avail.containsRange(c, w);
          case Variant::Trimmed: return triples->firstColorsOf(d.id, l.id).count(c) != 0;
        }
        return false;
      };
      for (int dir = 0; dir < 2; ++dir) {
        const auto direction = static_cast<Direction>(dir);
        const std::string tag = "_d" + std::to_string(d.id.value) + "_l" + std::to_string(l.id.value) + "_" +
                                dirTag[dir] + "_c";
        for (Color c : arcs[di].colors[dir][li]) {
          const VarIndex xc = *var(di, li, direction, c);
          const auto prev = var(di, li, direction, c - 1);
          if (variant == Variant::Base || isCandidate(c)) {
            // sum_{k<w} x[c+k] >= w * (x[c] - x[c-1])
            std::vector<Term> terms;
            for (int k = 0; k < w; ++k) {
              if (auto v = var(di, li, direction, c + k)) terms.push_back({*v, 1});
            }
            terms.push_back({xc, -w});
            bool withPrev = prev.has_value();
            if (variant == Variant::Base) {
              withPrev = c > 1;
            } else if (options.contiguity == ContiguityRule::CandidateNeighbour) {
              withPrev = withPrev && isCandidate(c - 1);
            }
            if (withPrev) terms.push_back({*prev, w});
            const auto fam = withPrev ? ConstraintFamily::ContiguityA : ConstraintFamily::ContiguityB;
            model.addConstraint(
                {std::string(familyTag(fam)) + tag + std::to_string(c), fam, std::move(terms), Relation::GreaterEqual, 0, 1});
          } else {
            // x[c] <= x[c-1]
            std::vector<Term> terms{{xc, 1}};
            if (prev) terms.push_back({*prev, -1});
            model.addConstraint({"ctg_c" + tag + std::to_string(c), ConstraintFamily::ContiguityC, std::move(terms),
                                 Relation::LessEqual, 0, 1});
          }
        }
      }
    }
  }

  if (variant == Variant::Base) {
    for (std::size_t di = 0; di < inst.demands.size(); ++di) {
      for (std::size_t li = 0; li < nLinks; ++li) {
        for (int dir = 0; dir < 2; ++dir) {
          for (Color c = 1; c <= slots; ++c) {
            if (net.available(li).contains(c)) continue;
            const VarIndex v = *var(di, li, static_cast<Direction>(dir), c);
            model.addConstraint({"fix_" + variableName(model.variables()[v]), ConstraintFamily::FixedZero,
                                 {{v, 1}}, Relation::Equal, 0, 1});
          }
        }
      }
    }
  }

  return model;
}

struct ModelStatistics {
  Variant variant = Variant::Trimmed;
  Mode mode = Mode::Feasibility;
  std::size_t variables = 0;
  std::size_t flowVariables = 0;
  std::size_t selectVariables = 0;
  std::size_t constraints = 0;
  std::map<ConstraintFamily, std::size_t> perFamily;
};

inline ModelStatistics modelStatistics(const MilpModel& m) {
  ModelStatistics s;
  s.variant = m.variant;
  s.mode = m.mode;
  s.variables = m.variables().size();
  s.flowVariables = m.flowVariableCount();
  s.selectVariables = m.selectVariableCount();
  s.constraints = m.constraints().size();
  for (ConstraintFamily f : kAllFamilies) s.perFamily[f] = 0;
  for (const auto& row : m.constraints()) ++s.perFamily[row.family];
  return s;
}

}  // namespace rsa
