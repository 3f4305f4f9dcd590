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

#ifndef POLICYEVOL_POLICY_H_
#define POLICYEVOL_POLICY_H_

#include <array>
#include <span>
#include <string>
#include <vector>

#include "policyevol/leduc.h"
#include "policyevol/memory.h"

namespace policyevol {

inline constexpr int kPolicyVersion = 1;
inline constexpr double kRowTolerance = 1e-9;

using ActionDistribution = std::array<double, kNumActions>;
using SupportMask = std::array<bool, kNumActions>;

// Conditional action distribution P(action | card rank, round). Every row is
// a distribution over the support mask of its round.
class PolicyTable {
 public:
  // Uniform over all four actions in both rounds.
  PolicyTable();
  explicit PolicyTable(std::array<SupportMask, kNumRounds> support);

  static PolicyTable Uniform() { return PolicyTable(); }

  const ActionDistribution& row(Rank rank, Round round) const {
    return rows_[RankIndex(rank)][RoundIndex(round)];
  }
  double prob(Rank rank, Round round, Action action) const {
    return row(rank, round)[ActionIndex(action)];
  }
  const SupportMask& support(Round round) const {
    return support_[RoundIndex(round)];
  }
  int support_size(Round round) const;

  // Throws std::invalid_argument unless the row is a distribution (within
  // kRowTolerance) that vanishes outside the support.
  void SetRow(Rank rank, Round round, const ActionDistribution& row);
  // Same row for both rounds.
  void SetRow(Rank rank, const ActionDistribution& row);

  bool Valid() const;

  friend bool operator==(const PolicyTable&, const PolicyTable&) = default;

 private:
  std::array<std::array<ActionDistribution, kNumRounds>, kNumRanks> rows_;
  std::array<SupportMask, kNumRounds> support_;
};

// Row restricted to `legal` and renormalized; uniform over `legal` if the row
// puts no mass there.
std::vector<double> RestrictToLegal(const ActionDistribution& row,
                                    std::span<const Action> legal);

enum class Character : std::uint8_t {
  kAggressive,
  kConservative,
  kNeutral,
  kFlexible,
};
std::string_view ToString(Character character);
// "radically" / "conservatively" / "neutrally" / "flexibly".
std::string_view Adverb(Character character);
Character ParseCharacter(std::string_view text);

struct PatternReport {
  PolicyTable table;
  Character character = Character::kNeutral;
  std::string rationale;
  friend bool operator==(const PatternReport&, const PatternReport&) = default;
};

PatternReport UniformPattern();

struct Detection {
  PolicyTable table;
  // Rows with no observations; they fall back to uniform over the support.
  std::array<std::array<bool, kNumRounds>, kNumRanks> low_confidence{};

  // Detected table with the unobserved rows taken from `old`.
  PolicyTable MergedWith(const PolicyTable& old) const;
};

// P(a|c) = (count(a,c) + alpha) / (count(c) + alpha * |support|).
Detection Detect(const HistoryDigest& digest, Role role, double alpha,
                 const PolicyTable& shape = PolicyTable());

struct DivergenceCell {
  Rank rank;
  Round round;
  Action action;
  double old_prob;
  double detected_prob;
  double tv_contribution;  // |old - detected| / 2
};

struct DivergenceFinding {
  std::vector<DivergenceCell> cells;
  std::array<std::array<double, kNumRounds>, kNumRanks> row_tv{};
  double max_tv = 0.0;
  bool triggered = false;
};

double TotalVariation(const ActionDistribution& p, const ActionDistribution& q);

// Per-row total variation; triggered iff some row exceeds tau. Throws
// std::invalid_argument if the supports differ.
DivergenceFinding Diverge(const PolicyTable& old_table,
                          const PolicyTable& detected, double tau);

// Joint P(a, c) per round with the card marginal P(c | History) it was built
// from.
struct JointTable {
  std::array<std::array<ActionDistribution, kNumRounds>, kNumRanks> joint{};
  std::array<std::array<double, kNumRanks>, kNumRounds> card_weight{};
};

// P(c | History) per round from the digest's counts for `role`; zero rows
// when the round has no observations.
std::array<std::array<double, kNumRanks>, kNumRounds> CardMarginals(
    const HistoryDigest& digest, Role role);

struct EvolutionParams {
  double tau = 0.2;     // divergence trigger (per-row total variation)
  double lambda = 0.5;  // revision blend toward the detected table
  double alpha = 1.0;   // Laplace smoothing for detection
};

// Builds the joint from per-card conditionals weighted by P(c | History).
JointTable JointFromConditionals(const PolicyTable& conditionals,
                                 const HistoryDigest& digest, Role role);

// Numeric joint evaluation: P(c|History) * ((1-lambda) P_old + lambda
// P_detect).
JointTable EvaluateJoint(const PolicyTable& old_table,
                         const HistoryDigest& digest, Role role,
                         const EvolutionParams& params);

// P_new(a|c) = joint(a,c) / P(c|History), rows renormalized. Card types with
// no mass keep the old row.
PolicyTable Revise(const JointTable& joint, const HistoryDigest& digest,
                   Role role, const PolicyTable& old_table);

// Aggregate raise mass above 0.5 is aggressive, fold+check mass above 0.5 is
// conservative, three distinct per-rank argmax actions is flexible, otherwise
// neutral; checked in that order. Rows are averaged over the two rounds.
Character ClassifyCharacter(const PolicyTable& table);

// Self pattern response to the freshly revised environmental pattern: the
// same blend/revise as the environment, then (with `shift_to_best_response`)
// lambda of every row's mass moved onto the expectimax best response against
// `env` at that row's canonical decision spot.
PatternReport EvolveSelf(const PatternReport& env, const PatternReport& old_self,
                         const HistoryDigest& digest,
                         const EvolutionParams& params,
                         bool shift_to_best_response);

// Best-response action for (rank, round) against `env` at the canonical
// spot: pre-reveal opening as small blind; post-reveal opening at 2-2,
// averaged over board cards.
Action BestResponseAction(const PolicyTable& env, Rank rank, Round round);

void to_json(nlohmann::json& j, const PolicyTable& table);
void from_json(const nlohmann::json& j, PolicyTable& table);
void to_json(nlohmann::json& j, const PatternReport& report);
void from_json(const nlohmann::json& j, PatternReport& report);
void to_json(nlohmann::json& j, const DivergenceFinding& finding);

}  // namespace policyevol

#endif  // POLICYEVOL_POLICY_H_
