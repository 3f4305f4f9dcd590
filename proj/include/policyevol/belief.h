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

#ifndef POLICYEVOL_BELIEF_H_
#define POLICYEVOL_BELIEF_H_

#include <array>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "policyevol/leduc.h"
#include "policyevol/policy.h"

namespace policyevol {

using RankDistribution = std::array<double, kNumRanks>;

// Likelihood factors below this are raised to it, so that one surprising
// action cannot annihilate the posterior.
inline constexpr double kLikelihoodFloor = 1e-3;

// Deck-counting distribution over the opponent's rank.
struct CardPrior {
  RankDistribution p{};
};

// Throws std::invalid_argument if the visible cards coincide.
CardPrior Prior(Card my_card, std::optional<Card> public_card);

// An action taken by the player whose card is being inferred.
struct ObservedAction {
  Action action;
  Round round;
};

// Opponent actions of the current game, in order, taken from a history.
std::vector<ObservedAction> ActionsOf(std::span<const HistoryStep> history,
                                      int player);

struct EvidenceStep {
  Action action;
  Round round;
  RankDistribution factors{};
  bool floored = false;
};

struct BeliefReport {
  RankDistribution posterior{};
  std::string best_combination;
  std::vector<EvidenceStep> evidence;
};

// posterior(c) ∝ prior(c) · Π_steps max(P_pattern(a | c, round), floor).
BeliefReport EnvironmentalBelief(const RawObservation& obs,
                                 std::span<const ObservedAction> opp_actions,
                                 const PolicyTable& pattern_env);

// Deck-counting prior wrapped as a report (no evidence).
BeliefReport PriorBelief(const RawObservation& obs);

struct SelfBelief {
  double win_now = 0.0;
  double draw_now = 0.0;
  double lose_now = 0.0;
  std::string advantages;
  std::string long_term_note;
  // The opponent's presumed posterior over our rank, derived from our own
  // actions weighted by our self pattern.
  RankDistribution opponent_view{};
};

// Showdown-if-now outcome rates against the posterior; pre-reveal compares
// ranks only.
SelfBelief MakeSelfBelief(const RawObservation& obs,
                          std::span<const ObservedAction> my_actions,
                          const PolicyTable& pattern_self,
                          const BeliefReport& env_belief);

void to_json(nlohmann::json& j, const BeliefReport& report);
void from_json(const nlohmann::json& j, BeliefReport& report);
void to_json(nlohmann::json& j, const SelfBelief& belief);

}  // namespace policyevol

#endif  // POLICYEVOL_BELIEF_H_
