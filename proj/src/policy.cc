// Copyright 2026 The PolicyEvol Lab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "policyevol/policy.h"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace policyevol {
namespace {

constexpr SupportMask kFullSupport = {true, true, true, true};

ActionDistribution UniformOver(const SupportMask& mask) {
  ActionDistribution row{};
  int n = 0;
  for (bool b : mask) n += b;
  for (int a = 0; a < kNumActions; ++a) row[a] = mask[a] ? 1.0 / n : 0.0;
  return row;
}

}  // namespace

PolicyTable::PolicyTable() : PolicyTable({kFullSupport, kFullSupport}) {}

PolicyTable::PolicyTable(std::array<SupportMask, kNumRounds> support)
    : support_(support) {
  for (int rd = 0; rd < kNumRounds; ++rd) {
    if (support_size(static_cast<Round>(rd)) == 0) {
      throw std::invalid_argument("policy support must be nonempty");
    }
    for (int r = 0; r < kNumRanks; ++r) rows_[r][rd] = UniformOver(support_[rd]);
  }
}

int PolicyTable::support_size(Round round) const {
  int n = 0;
  for (bool b : support(round)) n += b;
  return n;
}

void PolicyTable::SetRow(Rank rank, Round round, const ActionDistribution& row) {
  const SupportMask& mask = support(round);
  double total = 0.0;
  for (int a = 0; a < kNumActions; ++a) {
    if (!std::isfinite(row[a]) || row[a] < 0.0) {
      throw std::invalid_argument("policy row has a negative or non-finite entry");
    }
    if (!mask[a] && row[a] != 0.0) {
      throw std::invalid_argument("policy row has mass outside its support");
    }
    total += row[a];
  }
  if (std::abs(total - 1.0) > kRowTolerance) {
    throw std::invalid_argument("policy row does not sum to 1");
  }
  rows_[RankIndex(rank)][RoundIndex(round)] = row;
}

void PolicyTable::SetRow(Rank rank, const ActionDistribution& row) {
  SetRow(rank, Round::kPreReveal, row);
  SetRow(rank, Round::kPostReveal, row);
}

bool PolicyTable::Valid() const {
  for (int r = 0; r < kNumRanks; ++r) {
    for (int rd = 0; rd < kNumRounds; ++rd) {
      double total = 0.0;
      for (int a = 0; a < kNumActions; ++a) {
        const double p = rows_[r][rd][a];
        if (!(p >= 0.0 && p <= 1.0)) return false;
        if (!support_[rd][a] && p != 0.0) return false;
        total += p;
      }
      if (std::abs(total - 1.0) > kRowTolerance) return false;
    }
  }
  return true;
}

std::vector<double> RestrictToLegal(const ActionDistribution& row,
                                    std::span<const Action> legal) {
  std::vector<double> out(legal.size(), 0.0);
  double total = 0.0;
  for (std::size_t i = 0; i < legal.size(); ++i) {
    out[i] = row[ActionIndex(legal[i])];
    total += out[i];
  }
  for (double& p : out) {
    p = total > 0.0 ? p / total : 1.0 / static_cast<double>(legal.size());
  }
  return out;
}

std::string_view ToString(Character character) {
  switch (character) {
    case Character::kAggressive:
      return "aggressive";
    case Character::kConservative:
      return "conservative";
    case Character::kNeutral:
      return "neutral";
    case Character::kFlexible:
      return "flexible";
  }
  return "?";
}

std::string_view Adverb(Character character) {
  switch (character) {
    case Character::kAggressive:
      return "radically";
    case Character::kConservative:
      return "conservatively";
    case Character::kNeutral:
      return "neutrally";
    case Character::kFlexible:
      return "flexibly";
  }
  return "?";
}

Character ParseCharacter(std::string_view text) {
  for (auto c : {Character::kAggressive, Character::kConservative,
                 Character::kNeutral, Character::kFlexible}) {
    if (text == ToString(c) || text == Adverb(c)) return c;
  }
  throw std::invalid_argument("unknown character: " + std::string(text));
}

PatternReport UniformPattern() {
  PatternReport report;
  report.character = ClassifyCharacter(report.table);
  report.rationale = "cold start: uniform over all actions";
  return report;
}

PolicyTable Detection::MergedWith(const PolicyTable& old) const {
  PolicyTable merged = table;
  for (Rank rank : kAllRanks) {
    for (int rd = 0; rd < kNumRounds; ++rd) {
      const Round round = static_cast<Round>(rd);
      if (low_confidence[RankIndex(rank)][rd]) {
        merged.SetRow(rank, round, old.row(rank, round));
      }
    }
  }
  return merged;
}

Detection Detect(const HistoryDigest& digest, Role role, double alpha,
                 const PolicyTable& shape) {
  if (alpha < 0.0) throw std::invalid_argument("alpha must be nonnegative");
  Detection detection{shape, {}};
  for (Rank rank : kAllRanks) {
    for (int rd = 0; rd < kNumRounds; ++rd) {
      const Round round = static_cast<Round>(rd);
      const SupportMask& mask = shape.support(round);
      double total = 0.0;
      ActionDistribution row{};
      for (Action a : kAllActions) {
        if (!mask[ActionIndex(a)]) continue;
        row[ActionIndex(a)] = digest.count(role, rank, round, a) + alpha;
        total += row[ActionIndex(a)];
      }
      const bool observed = digest.row_total(role, rank, round) > 0;
      detection.low_confidence[RankIndex(rank)][rd] = !observed;
      if (total <= 0.0) {
        row = UniformOver(mask);
      } else {
        for (double& p : row) p /= total;
      }
      detection.table.SetRow(rank, round, row);
    }
  }
  return detection;
}

double TotalVariation(const ActionDistribution& p,
                      const ActionDistribution& q) {
  double sum = 0.0;
  for (int a = 0; a < kNumActions; ++a) sum += std::abs(p[a] - q[a]);
  return 0.5 * sum;
}

DivergenceFinding Diverge(const PolicyTable& old_table,
                          const PolicyTable& detected, double tau) {
  for (int rd = 0; rd < kNumRounds; ++rd) {
    const Round round = static_cast<Round>(rd);
    if (old_table.support(round) != detected.support(round)) {
      throw std::invalid_argument("policy tables have mismatched supports");
    }
  }
  DivergenceFinding finding;
  for (Rank rank : kAllRanks) {
    for (int rd = 0; rd < kNumRounds; ++rd) {
      const Round round = static_cast<Round>(rd);
      const auto& p = old_table.row(rank, round);
      const auto& q = detected.row(rank, round);
      for (Action a : kAllActions) {
        const int i = ActionIndex(a);
        if (!old_table.support(round)[i]) continue;
        finding.cells.push_back(DivergenceCell{rank, round, a, p[i], q[i],
                                               0.5 * std::abs(p[i] - q[i])});
      }
      const double tv = TotalVariation(p, q);
      finding.row_tv[RankIndex(rank)][rd] = tv;
      finding.max_tv = std::max(finding.max_tv, tv);
    }
  }
  finding.triggered = finding.max_tv > tau;
  return finding;
}

std::array<std::array<double, kNumRanks>, kNumRounds> CardMarginals(
    const HistoryDigest& digest, Role role) {
  std::array<std::array<double, kNumRanks>, kNumRounds> marginals{};
  for (int rd = 0; rd < kNumRounds; ++rd) {
    const Round round = static_cast<Round>(rd);
    const int total = digest.context_total(role, round);
    if (total == 0) continue;
    for (Rank rank : kAllRanks) {
      marginals[rd][RankIndex(rank)] =
          static_cast<double>(digest.row_total(role, rank, round)) / total;
    }
  }
  return marginals;
}

JointTable JointFromConditionals(const PolicyTable& conditionals,
                                 const HistoryDigest& digest, Role role) {
  JointTable joint;
  joint.card_weight = CardMarginals(digest, role);
  for (Rank rank : kAllRanks) {
    for (int rd = 0; rd < kNumRounds; ++rd) {
      const double weight = joint.card_weight[rd][RankIndex(rank)];
      const auto& row = conditionals.row(rank, static_cast<Round>(rd));
      for (int a = 0; a < kNumActions; ++a) {
        joint.joint[RankIndex(rank)][rd][a] = weight * row[a];
      }
    }
  }
  return joint;
}

JointTable EvaluateJoint(const PolicyTable& old_table,
                         const HistoryDigest& digest, Role role,
                         const EvolutionParams& params) {
  const Detection detection = Detect(digest, role, params.alpha, old_table);
  const PolicyTable detected = detection.MergedWith(old_table);
  PolicyTable blended = old_table;
  for (Rank rank : kAllRanks) {
    for (int rd = 0; rd < kNumRounds; ++rd) {
      const Round round = static_cast<Round>(rd);
      ActionDistribution row;
      const auto& p_old = old_table.row(rank, round);
      const auto& p_det = detected.row(rank, round);
      for (int a = 0; a < kNumActions; ++a) {
        row[a] = (1.0 - params.lambda) * p_old[a] + params.lambda * p_det[a];
      }
      blended.SetRow(rank, round, row);
    }
  }
  return JointFromConditionals(blended, digest, role);
}

PolicyTable Revise(const JointTable& joint, const HistoryDigest& digest,
                   Role role, const PolicyTable& old_table) {
  const auto marginals = CardMarginals(digest, role);
  PolicyTable revised = old_table;
  for (Rank rank : kAllRanks) {
    for (int rd = 0; rd < kNumRounds; ++rd) {
      const Round round = static_cast<Round>(rd);
      const double weight = marginals[rd][RankIndex(rank)];
      if (weight <= 0.0) continue;
      ActionDistribution row;
      double total = 0.0;
      for (int a = 0; a < kNumActions; ++a) {
        row[a] = joint.joint[RankIndex(rank)][rd][a] / weight;
        total += row[a];
      }
      if (total <= 0.0) continue;
      for (double& p : row) p /= total;
      revised.SetRow(rank, round, row);
    }
  }
  return revised;
}

Character ClassifyCharacter(const PolicyTable& table) {
  std::array<ActionDistribution, kNumRanks> merged{};
  for (Rank rank : kAllRanks) {
    for (int a = 0; a < kNumActions; ++a) {
      merged[RankIndex(rank)][a] =
          0.5 * (table.row(rank, Round::kPreReveal)[a] +
                 table.row(rank, Round::kPostReveal)[a]);
    }
  }
  double raise_mass = 0.0;
  double passive_mass = 0.0;
  for (const auto& row : merged) {
    raise_mass += row[ActionIndex(Action::kRaise)] / kNumRanks;
    passive_mass += (row[ActionIndex(Action::kFold)] +
                     row[ActionIndex(Action::kCheck)]) /
                    kNumRanks;
  }
  if (raise_mass > 0.5) return Character::kAggressive;
  if (passive_mass > 0.5) return Character::kConservative;
  std::array<int, kNumRanks> argmax{};
  for (int r = 0; r < kNumRanks; ++r) {
    argmax[r] = static_cast<int>(
        std::max_element(merged[r].begin(), merged[r].end()) -
        merged[r].begin());
  }
  if (argmax[0] != argmax[1] && argmax[1] != argmax[2] &&
      argmax[0] != argmax[2]) {
    return Character::kFlexible;
  }
  return Character::kNeutral;
}

void to_json(nlohmann::json& j, const PolicyTable& table) {
  j = nlohmann::json::object();
  j["policy_version"] = kPolicyVersion;
  nlohmann::json contexts = nlohmann::json::object();
  for (int rd = 0; rd < kNumRounds; ++rd) {
    const Round round = static_cast<Round>(rd);
    nlohmann::json ctx = nlohmann::json::object();
    nlohmann::json support = nlohmann::json::array();
    for (Action a : kAllActions) {
      if (table.support(round)[ActionIndex(a)]) support.push_back(a);
    }
    ctx["support"] = support;
    nlohmann::json rows = nlohmann::json::object();
    for (Rank rank : kAllRanks) {
      nlohmann::json row = nlohmann::json::object();
      for (Action a : kAllActions) {
        if (!table.support(round)[ActionIndex(a)]) continue;
        row[std::string(ToString(a))] = table.prob(rank, round, a);
      }
      rows[std::string(1, RankLetter(rank))] = row;
    }
    ctx["rows"] = rows;
    contexts[std::string(ToString(round))] = ctx;
  }
  j["contexts"] = contexts;
}

void from_json(const nlohmann::json& j, PolicyTable& table) {
  const int version = j.at("policy_version").get<int>();
  if (version != kPolicyVersion) {
    throw std::invalid_argument("unsupported policy_version " +
                                std::to_string(version));
  }
  std::array<SupportMask, kNumRounds> support{};
  for (int rd = 0; rd < kNumRounds; ++rd) {
    const auto& ctx =
        j.at("contexts").at(std::string(ToString(static_cast<Round>(rd))));
    for (const auto& a : ctx.at("support")) {
      support[rd][ActionIndex(a.get<Action>())] = true;
    }
  }
  PolicyTable parsed(support);
  for (int rd = 0; rd < kNumRounds; ++rd) {
    const Round round = static_cast<Round>(rd);
    const auto& rows = j.at("contexts").at(std::string(ToString(round))).at("rows");
    for (Rank rank : kAllRanks) {
      const auto& row_json = rows.at(std::string(1, RankLetter(rank)));
      ActionDistribution row{};
      for (const auto& [name, value] : row_json.items()) {
        row[ActionIndex(ParseAction(name))] = value.get<double>();
      }
      parsed.SetRow(rank, round, row);
    }
  }
  table = parsed;
}

void to_json(nlohmann::json& j, const PatternReport& report) {
  j = {{"table", report.table},
       {"character", std::string(ToString(report.character))},
       {"rationale", report.rationale}};
}

void from_json(const nlohmann::json& j, PatternReport& report) {
  report.table = j.at("table").get<PolicyTable>();
  report.character = ParseCharacter(j.at("character").get<std::string>());
  report.rationale = j.value("rationale", "");
}

void to_json(nlohmann::json& j, const DivergenceFinding& finding) {
  j = nlohmann::json::object();
  j["triggered"] = finding.triggered;
  j["max_tv"] = finding.max_tv;
  nlohmann::json cells = nlohmann::json::array();
  for (const auto& c : finding.cells) {
    if (c.tv_contribution == 0.0) continue;
    cells.push_back({{"card", std::string(1, RankLetter(c.rank))},
                     {"round", std::string(ToString(c.round))},
                     {"action", c.action},
                     {"old", c.old_prob},
                     {"detected", c.detected_prob},
                     {"tv", c.tv_contribution}});
  }
  j["cells"] = cells;
}

}  // namespace policyevol
