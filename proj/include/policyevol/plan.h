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

#ifndef POLICYEVOL_PLAN_H_
#define POLICYEVOL_PLAN_H_

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "policyevol/belief.h"
#include "policyevol/leduc.h"
#include "policyevol/policy.h"
#include "policyevol/rng.h"

namespace policyevol {

// Everything the deciding seat knows: its observation plus the public
// betting history of the current game.
struct DecisionContext {
  RawObservation observation;
  int seat = 0;
  int small_blind = 0;
  Rules rules;
  std::vector<HistoryStep> history;
};

// Context of the player to act in a live state.
DecisionContext MakeContext(const GameState& state);

// How our own later decisions inside the lookahead are valued.
enum class Lookahead : std::uint8_t {
  kMaximize,    // best continuation
  kSelfPolicy,  // weighted by the self pattern
};

struct PlanOptions {
  Lookahead lookahead = Lookahead::kMaximize;
  // Hindsight evaluation: a known board card replaces the chance node, a
  // known opponent card replaces the belief.
  std::optional<Card> known_board;
  std::optional<Card> known_opponent_card;
};

struct OutcomeRates {
  double win = 0.0;
  double lose = 0.0;
  double draw = 0.0;
};

struct OpponentCardBreakdown {
  Rank rank = Rank::kJack;
  double weight = 0.0;
  // Opponent's immediate reply distribution; empty when the plan ends the
  // game or the opponent does not move next.
  std::vector<std::pair<Action, double>> response;
  OutcomeRates rates;
  double expected_gain = 0.0;
};

struct PlanEvaluation {
  Action action = Action::kFold;
  double win_rate = 0.0;
  double lose_rate = 0.0;
  double draw_rate = 0.0;
  // Chips won if the game were settled in our favour right after the action
  // (opponent's contribution), and chips lost otherwise (ours).
  int win_payoff = 0;
  int lose_payoff = 0;
  double expected_gain = 0.0;
  std::vector<OpponentCardBreakdown> breakdown;
};

// One plan per legal action, valued by exact expectimax over the remaining
// tree: opponent nodes weighted by the environmental pattern (restricted to
// legal actions), the board card uniform over unseen cards, our own later
// nodes maximized at the information-set level with beliefs updated along
// the path.
std::vector<PlanEvaluation> EnumeratePlans(const DecisionContext& context,
                                           const RankDistribution& posterior,
                                           const PolicyTable& pattern_env,
                                           const PolicyTable& self_policy,
                                           const PlanOptions& options = {});

struct PlanChoice {
  std::vector<PlanEvaluation> ranked;
  PlanEvaluation best;
  std::string rationale;
};

// Descending expected gain; exact ties broken by style (aggressive prefers
// raise > call > check > fold, conservative the reverse, otherwise the fixed
// action order).
PlanChoice SelectBest(std::vector<PlanEvaluation> plans, Character style);

struct ActMode {
  bool sampled = false;
  double temperature = 1.0;
};

// Greedy returns the best plan; sampled draws from softmax(gain / T).
Action Act(const PlanChoice& choice, const ActMode& mode, Rng& rng);

// Rebuilds the full state for a hypothetical deal consistent with the
// context, replaying the public history.
GameState RebuildState(const DecisionContext& context, Card opponent_card,
                       Card board);

void to_json(nlohmann::json& j, const PlanEvaluation& plan);
void from_json(const nlohmann::json& j, PlanEvaluation& plan);
void to_json(nlohmann::json& j, const PlanChoice& choice);

}  // namespace policyevol

#endif  // POLICYEVOL_PLAN_H_
