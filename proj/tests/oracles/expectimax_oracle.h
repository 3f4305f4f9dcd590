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

// Plain full-tree enumeration of plan values, written independently of the
// plan engine. Every complete deal (opponent card, board) consistent with the
// decision point is listed with its probability; each deal's tree is walked
// separately. Our own later decisions are chosen per information set (public
// history plus visible board) by summing, over all deals that reach it, the
// reach-weighted value of each action.

#ifndef POLICYEVOL_TESTS_ORACLES_EXPECTIMAX_ORACLE_H_
#define POLICYEVOL_TESTS_ORACLES_EXPECTIMAX_ORACLE_H_

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "policyevol/leduc.h"
#include "policyevol/plan.h"
#include "policyevol/policy.h"

namespace policyevol::oracle {

struct OracleValue {
  double gain = 0.0;
  double win = 0.0;
  double lose = 0.0;
  double draw = 0.0;
};

class ExpectimaxOracle {
 public:
  ExpectimaxOracle(const DecisionContext& context,
                   const std::array<double, 3>& posterior,
                   const PolicyTable& env, const PolicyTable* self_policy)
      : context_(context), env_(env), self_policy_(self_policy) {
    const Card mine = context.observation.hand;
    const std::optional<Card> seen_board = context.observation.public_card;
    std::array<int, 3> copies{};
    for (int k = 0; k < 6; ++k) {
      if (k == mine.index()) continue;
      if (seen_board && k == seen_board->index()) continue;
      ++copies[static_cast<int>(Card::FromIndex(k).rank)];
    }
    double total = 0.0;
    for (int k = 0; k < 6; ++k) {
      if (k == mine.index()) continue;
      if (seen_board && k == seen_board->index()) continue;
      const Card opp = Card::FromIndex(k);
      const int r = static_cast<int>(opp.rank);
      const double w_card = posterior[r] / copies[r];
      int boards = 0;
      for (int b = 0; b < 6; ++b) {
        if (b != k && b != mine.index()) ++boards;
      }
      for (int b = 0; b < 6; ++b) {
        if (b == k || b == mine.index()) continue;
        if (seen_board && b != seen_board->index()) continue;
        const double w = seen_board ? w_card : w_card / boards;
        deals_.push_back({opp, Card::FromIndex(b), w});
        total += w;
      }
    }
    for (auto& d : deals_) d.weight /= total;
  }

  OracleValue Evaluate(Action root_action) {
    std::vector<HistoryStep> history = context_.history;
    OracleValue out;
    for (const auto& d : deals_) {
      GameState s = Rebuild(d, context_.history);
      s = ApplyAction(s, root_action);
      const OracleValue v = Value(d, s);
      out.gain += d.weight * v.gain;
      out.win += d.weight * v.win;
      out.lose += d.weight * v.lose;
      out.draw += d.weight * v.draw;
    }
    return out;
  }

 private:
  struct FullDeal {
    Card opp;
    Card board;
    double weight;
  };

  GameState Rebuild(const FullDeal& d,
                    const std::vector<HistoryStep>& history) const {
    Deal deal;
    deal.private_cards[context_.seat] = context_.observation.hand;
    deal.private_cards[1 - context_.seat] = d.opp;
    deal.board = d.board;
    GameState s = NewGameWithDeal(deal, context_.small_blind, context_.rules);
    for (const auto& step : history) s = ApplyAction(s, step.action);
    return s;
  }

  double OpponentProb(const FullDeal& d, const GameState& s, Action a) const {
    const auto legal = LegalActions(s);
    const auto pi = RestrictToLegal(env_.row(d.opp.rank, s.round()), legal);
    for (std::size_t i = 0; i < legal.size(); ++i) {
      if (legal[i] == a) return pi[i];
    }
    return 0.0;
  }

  // Probability that the opponent (holding d.opp) produced the history
  // beyond the decision point.
  double Reach(const FullDeal& d, const std::vector<HistoryStep>& history) const {
    double reach = d.weight;
    GameState s = Rebuild(d, context_.history);
    for (std::size_t i = context_.history.size(); i < history.size(); ++i) {
      if (history[i].player != context_.seat) {
        reach *= OpponentProb(d, s, history[i].action);
      }
      s = ApplyAction(s, history[i].action);
    }
    return reach;
  }

  std::string Key(const GameState& s) const {
    std::string key;
    if (s.public_card()) key = s.public_card()->ToString();
    key += '|';
    for (const auto& step : s.history()) key += ActionLetter(step.action);
    return key;
  }

  Action Choose(const GameState& s) {
    const std::string key = Key(s);
    if (auto it = choice_.find(key); it != choice_.end()) return it->second;
    const auto legal = LegalActions(s);
    std::vector<double> score(legal.size(), 0.0);
    for (const auto& d : deals_) {
      if (s.public_card() && !(d.board == *s.public_card())) continue;
      const double reach = Reach(d, s.history());
      if (reach == 0.0) continue;
      const GameState mine = Rebuild(d, s.history());
      for (std::size_t i = 0; i < legal.size(); ++i) {
        score[i] += reach * Value(d, ApplyAction(mine, legal[i])).gain;
      }
    }
    double best = -1e300;
    for (double v : score) best = std::max(best, v);
    Action chosen = legal.front();
    bool found = false;
    for (Action a : kAllActions) {
      for (std::size_t i = 0; i < legal.size() && !found; ++i) {
        if (legal[i] == a && score[i] >= best - 1e-12) {
          chosen = a;
          found = true;
        }
      }
    }
    choice_[key] = chosen;
    return chosen;
  }

  OracleValue Value(const FullDeal& d, const GameState& s) {
    if (s.terminal()) {
      const Outcome o = Settle(s);
      OracleValue v;
      v.gain = o.net[context_.seat];
      if (!o.winner) {
        v.draw = 1.0;
      } else if (*o.winner == context_.seat) {
        v.win = 1.0;
      } else {
        v.lose = 1.0;
      }
      return v;
    }
    OracleValue out;
    const auto legal = LegalActions(s);
    if (s.to_act() == context_.seat) {
      if (self_policy_ == nullptr) {
        return Value(d, ApplyAction(s, Choose(s)));
      }
      const auto sigma = RestrictToLegal(
          self_policy_->row(context_.observation.hand.rank, s.round()), legal);
      for (std::size_t i = 0; i < legal.size(); ++i) {
        Accumulate(out, Value(d, ApplyAction(s, legal[i])), sigma[i]);
      }
      return out;
    }
    for (Action a : legal) {
      const double p = OpponentProb(d, s, a);
      if (p == 0.0) continue;
      Accumulate(out, Value(d, ApplyAction(s, a)), p);
    }
    return out;
  }

  static void Accumulate(OracleValue& acc, const OracleValue& v, double p) {
    acc.gain += p * v.gain;
    acc.win += p * v.win;
    acc.lose += p * v.lose;
    acc.draw += p * v.draw;
  }

  const DecisionContext& context_;
  const PolicyTable& env_;
  const PolicyTable* self_policy_;
  std::vector<FullDeal> deals_;
  std::map<std::string, Action> choice_;
};

}  // namespace policyevol::oracle

#endif  // POLICYEVOL_TESTS_ORACLES_EXPECTIMAX_ORACLE_H_
