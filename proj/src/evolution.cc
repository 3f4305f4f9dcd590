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

#include <sstream>

#include "policyevol/belief.h"
#include "policyevol/plan.h"
#include "policyevol/policy.h"

namespace policyevol {
namespace {

Card AnyOtherCard(std::initializer_list<Card> taken) {
  for (int i = 0; i < kNumCards; ++i) {
    const Card card = Card::FromIndex(i);
    bool used = false;
    for (const Card& t : taken) used = used || t == card;
    if (!used) return card;
  }
  throw std::logic_error("deck exhausted");
}

std::vector<PlanEvaluation> PlansAt(const PolicyTable& env, Card mine,
                                    Card board,
                                    std::span<const Action> prefix) {
  Deal deal;
  deal.private_cards[0] = mine;
  deal.private_cards[1] = AnyOtherCard({mine, board});
  deal.board = board;
  GameState state = NewGameWithDeal(deal, /*small_blind=*/0, Rules{});
  for (Action a : prefix) state = ApplyAction(state, a);
  DecisionContext context;
  context.observation = Observe(state, 0);
  context.seat = 0;
  context.small_blind = 0;
  context.history = state.history();
  const auto opp_actions = ActionsOf(context.history, 1);
  const BeliefReport belief =
      EnvironmentalBelief(context.observation, opp_actions, env);
  return EnumeratePlans(context, belief.posterior, env, env);
}

}  // namespace

Action BestResponseAction(const PolicyTable& env, Rank rank, Round round) {
  const Card mine{rank, Suit::kSpades};
  std::array<double, kNumActions> gain{};
  std::array<bool, kNumActions> seen{};
  if (round == Round::kPreReveal) {
    const Card board = AnyOtherCard({mine});
    for (const auto& plan : PlansAt(env, mine, board, {})) {
      gain[ActionIndex(plan.action)] = plan.expected_gain;
      seen[ActionIndex(plan.action)] = true;
    }
  } else {
    constexpr std::array<Action, 2> kLimp = {Action::kCall, Action::kCheck};
    for (int b = 0; b < kNumCards; ++b) {
      const Card board = Card::FromIndex(b);
      if (board == mine) continue;
      for (const auto& plan : PlansAt(env, mine, board, kLimp)) {
        gain[ActionIndex(plan.action)] += plan.expected_gain;
        seen[ActionIndex(plan.action)] = true;
      }
    }
  }
  int best = -1;
  for (int a = 0; a < kNumActions; ++a) {
    if (!seen[a]) continue;
    if (best < 0 || gain[a] > gain[best] + 1e-12) best = a;
  }
  return kAllActions[best];
}

PatternReport EvolveSelf(const PatternReport& env, const PatternReport& old_self,
                         const HistoryDigest& digest,
                         const EvolutionParams& params,
                         bool shift_to_best_response) {
  const JointTable joint =
      EvaluateJoint(old_self.table, digest, Role::kSelf, params);
  PatternReport next;
  next.table = Revise(joint, digest, Role::kSelf, old_self.table);
  std::ostringstream why;
  why << "self pattern revised from its own recent play";
  if (shift_to_best_response) {
    why << "; shifted toward best responses:";
    for (Rank rank : kAllRanks) {
      for (int rd = 0; rd < kNumRounds; ++rd) {
        const Round round = static_cast<Round>(rd);
        const Action target = BestResponseAction(env.table, rank, round);
        if (!next.table.support(round)[ActionIndex(target)]) continue;
        ActionDistribution row = next.table.row(rank, round);
        for (double& p : row) p *= 1.0 - params.lambda;
        row[ActionIndex(target)] += params.lambda;
        next.table.SetRow(rank, round, row);
        why << ' ' << RankLetter(rank) << '/' << ToString(round) << "->"
            << ToString(target);
      }
    }
  }
  next.character = ClassifyCharacter(next.table);
  why << "; the opponent now plays " << Adverb(env.character);
  next.rationale = why.str();
  return next;
}

}  // namespace policyevol
