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

#include "policyevol/plan.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace policyevol {
namespace {

// Own-node ties within this margin go to the earliest action in the fixed
// order raise, call, check, fold.
constexpr double kTieMargin = 1e-12;
constexpr double kSelectTieMargin = 1e-9;

struct Leaf {
  double ev = 0.0;
  double win = 0.0;
  double lose = 0.0;
  double draw = 0.0;

  void AddScaled(const Leaf& other, double scale) {
    ev += scale * other.ev;
    win += scale * other.win;
    lose += scale * other.lose;
    draw += scale * other.draw;
  }
};

using PerCard = std::array<Leaf, kNumCards>;
using Weights = std::array<double, kNumCards>;
using States = std::array<std::optional<GameState>, kNumCards>;

GameState Replay(const Deal& deal, int small_blind, const Rules& rules,
                 std::span<const HistoryStep> history) {
  GameState state = NewGameWithDeal(deal, small_blind, rules);
  for (const HistoryStep& step : history) {
    state = ApplyAction(state, step.action);
  }
  return state;
}

Deal MakeDeal(int seat, Card mine, Card theirs, Card board) {
  Deal deal;
  deal.private_cards[seat] = mine;
  deal.private_cards[1 - seat] = theirs;
  deal.board = board;
  return deal;
}

class Searcher {
 public:
  Searcher(const DecisionContext& context, const PolicyTable& env,
           const PolicyTable& self, const PlanOptions& options)
      : context_(context),
        env_(env),
        self_(self),
        options_(options),
        mine_(context.observation.hand),
        seat_(context.seat) {}

  PerCard AfterAction(const States& states, const Weights& w,
                      Action action) const {
    States children;
    const GameState* parent = nullptr;
    const GameState* child = nullptr;
    for (int k = 0; k < kNumCards; ++k) {
      if (!states[k]) continue;
      children[k] = ApplyAction(*states[k], action);
      parent = &*states[k];
      child = &*children[k];
    }
    const bool revealed = !child->terminal() &&
                          parent->round() == Round::kPreReveal &&
                          child->round() == Round::kPostReveal;
    if (!revealed) return Value(children, w);

    PerCard result{};
    for (int b = 0; b < kNumCards; ++b) {
      const Card board = Card::FromIndex(b);
      if (board == mine_) continue;
      if (options_.known_board && !(board == *options_.known_board)) continue;
      States branch;
      Weights bw{};
      std::array<double, kNumCards> chance{};
      bool any = false;
      for (int k = 0; k < kNumCards; ++k) {
        if (!children[k] || k == b) continue;
        // Board uniform over the four cards unseen given both private cards.
        chance[k] = options_.known_board ? 1.0 : 0.25;
        bw[k] = w[k] * chance[k];
        branch[k] = Replay(MakeDeal(seat_, mine_, Card::FromIndex(k), board),
                           context_.small_blind, context_.rules,
                           children[k]->history());
        any = true;
      }
      if (!any) continue;
      const PerCard values = Value(branch, bw);
      for (int k = 0; k < kNumCards; ++k) {
        if (branch[k]) result[k].AddScaled(values[k], chance[k]);
      }
    }
    return result;
  }

  PerCard Value(const States& states, const Weights& w) const {
    const GameState* any = nullptr;
    for (const auto& s : states) {
      if (s) {
        any = &*s;
        break;
      }
    }
    PerCard result{};
    if (any->terminal()) {
      for (int k = 0; k < kNumCards; ++k) {
        if (!states[k]) continue;
        const Outcome& outcome = *states[k]->outcome();
        Leaf& leaf = result[k];
        leaf.ev = outcome.net[seat_];
        if (!outcome.winner) {
          leaf.draw = 1.0;
        } else if (*outcome.winner == seat_) {
          leaf.win = 1.0;
        } else {
          leaf.lose = 1.0;
        }
      }
      return result;
    }

    const std::vector<Action> legal = LegalActions(*any);
    const Round round = any->round();
    if (any->to_act() == seat_) {
      std::vector<PerCard> per_action;
      per_action.reserve(legal.size());
      for (Action a : legal) per_action.push_back(AfterAction(states, w, a));
      if (options_.lookahead == Lookahead::kSelfPolicy) {
        const auto sigma = RestrictToLegal(self_.row(mine_.rank, round), legal);
        for (std::size_t i = 0; i < legal.size(); ++i) {
          for (int k = 0; k < kNumCards; ++k) {
            if (states[k]) result[k].AddScaled(per_action[i][k], sigma[i]);
          }
        }
        return result;
      }
      std::vector<double> scores(legal.size(), 0.0);
      double best = -1e300;
      for (std::size_t i = 0; i < legal.size(); ++i) {
        for (int k = 0; k < kNumCards; ++k) {
          if (states[k]) scores[i] += w[k] * per_action[i][k].ev;
        }
        best = std::max(best, scores[i]);
      }
      std::size_t chosen = legal.size();
      for (Action a : kAllActions) {
        for (std::size_t i = 0; i < legal.size(); ++i) {
          if (legal[i] == a && scores[i] >= best - kTieMargin) chosen = i;
        }
        if (chosen != legal.size()) break;
      }
      return per_action[chosen];
    }

    // Opponent node.
    std::array<std::vector<double>, kNumCards> pi;
    for (int k = 0; k < kNumCards; ++k) {
      if (!states[k]) continue;
      pi[k] = RestrictToLegal(env_.row(Card::FromIndex(k).rank, round), legal);
    }
    for (std::size_t i = 0; i < legal.size(); ++i) {
      Weights child_w{};
      for (int k = 0; k < kNumCards; ++k) {
        if (states[k]) child_w[k] = w[k] * pi[k][i];
      }
      const PerCard values = AfterAction(states, child_w, legal[i]);
      for (int k = 0; k < kNumCards; ++k) {
        if (states[k]) result[k].AddScaled(values[k], pi[k][i]);
      }
    }
    return result;
  }

 private:
  const DecisionContext& context_;
  const PolicyTable& env_;
  const PolicyTable& self_;
  const PlanOptions& options_;
  Card mine_;
  int seat_;
};

int StylePreference(Action action, Character style) {
  const int fixed = ActionIndex(action);
  if (style == Character::kConservative) return kNumActions - 1 - fixed;
  return fixed;
}

std::string Fixed(double v, int digits = 3) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
  return buf;
}

}  // namespace

DecisionContext MakeContext(const GameState& state) {
  if (state.terminal()) throw GameError("no decision in a finished game");
  const int p = state.to_act();
  return {Observe(state, p), p, state.small_blind(), state.rules(),
          state.history()};
}

GameState RebuildState(const DecisionContext& context, Card opponent_card,
                       Card board) {
  const RawObservation& obs = context.observation;
  if (obs.public_card && !(*obs.public_card == board)) {
    throw std::invalid_argument("board differs from the observed public card");
  }
  GameState state = Replay(MakeDeal(context.seat, obs.hand, opponent_card, board),
                           context.small_blind, context.rules, context.history);
  if (state.terminal() || state.to_act() != context.seat ||
      Observe(state, context.seat) != obs) {
    throw std::invalid_argument(
        "decision context is inconsistent with its observation");
  }
  return state;
}

std::vector<PlanEvaluation> EnumeratePlans(const DecisionContext& context,
                                           const RankDistribution& posterior,
                                           const PolicyTable& pattern_env,
                                           const PolicyTable& self_policy,
                                           const PlanOptions& options) {
  const RawObservation& obs = context.observation;
  if (obs.legal_actions.empty()) {
    throw std::invalid_argument("no legal actions to plan for");
  }
  const Card mine = obs.hand;

  // Physical opponent cards consistent with what we see.
  std::array<int, kNumRanks> copies{};
  std::array<bool, kNumCards> possible{};
  for (int k = 0; k < kNumCards; ++k) {
    const Card card = Card::FromIndex(k);
    if (card == mine) continue;
    if (obs.public_card && card == *obs.public_card) continue;
    if (options.known_board && card == *options.known_board) continue;
    if (options.known_opponent_card && !(card == *options.known_opponent_card)) {
      continue;
    }
    possible[k] = true;
    ++copies[RankIndex(card.rank)];
  }

  Weights w{};
  States root;
  double total = 0.0;
  for (int k = 0; k < kNumCards; ++k) {
    if (!possible[k]) continue;
    const Card theirs = Card::FromIndex(k);
    w[k] = options.known_opponent_card
               ? 1.0
               : posterior[RankIndex(theirs.rank)] / copies[RankIndex(theirs.rank)];
    total += w[k];
    Card board;
    if (obs.public_card) {
      board = *obs.public_card;
    } else if (options.known_board) {
      board = *options.known_board;
    } else {
      // Placeholder: replaced at the chance node before it is ever seen.
      for (int b = 0; b < kNumCards; ++b) {
        if (b != k && !(Card::FromIndex(b) == mine)) {
          board = Card::FromIndex(b);
          break;
        }
      }
    }
    root[k] = RebuildState(context, theirs, board);
  }
  if (total <= 0.0) {
    throw std::invalid_argument("belief puts no mass on any possible card");
  }
  for (double& x : w) x /= total;

  const Searcher searcher(context, pattern_env, self_policy, options);
  const GameState& any = **std::find_if(
      root.begin(), root.end(), [](const auto& s) { return s.has_value(); });
  std::vector<PlanEvaluation> plans;
  for (Action action : obs.legal_actions) {
    const PerCard values = searcher.AfterAction(root, w, action);
    PlanEvaluation plan;
    plan.action = action;
    const GameState next = ApplyAction(any, action);
    const int opp = 1 - context.seat;
    if (action == Action::kFold) {
      plan.win_payoff = 0;
    } else {
      plan.win_payoff = next.contributions()[opp];
    }
    plan.lose_payoff = next.contributions()[context.seat];
    const bool opponent_replies = !next.terminal() && next.to_act() == opp &&
                                  next.round() == any.round();

    std::array<OpponentCardBreakdown, kNumRanks> by_rank;
    for (Rank rank : kAllRanks) by_rank[RankIndex(rank)].rank = rank;
    for (int k = 0; k < kNumCards; ++k) {
      if (!possible[k]) continue;
      const Leaf& leaf = values[k];
      plan.expected_gain += w[k] * leaf.ev;
      plan.win_rate += w[k] * leaf.win;
      plan.lose_rate += w[k] * leaf.lose;
      plan.draw_rate += w[k] * leaf.draw;
      auto& entry = by_rank[RankIndex(Card::FromIndex(k).rank)];
      entry.weight += w[k];
      entry.expected_gain += w[k] * leaf.ev;
      entry.rates.win += w[k] * leaf.win;
      entry.rates.lose += w[k] * leaf.lose;
      entry.rates.draw += w[k] * leaf.draw;
    }
    for (auto& entry : by_rank) {
      if (entry.weight <= 0.0) continue;
      entry.expected_gain /= entry.weight;
      entry.rates.win /= entry.weight;
      entry.rates.lose /= entry.weight;
      entry.rates.draw /= entry.weight;
      if (opponent_replies) {
        const auto legal = LegalActions(next);
        const auto pi =
            RestrictToLegal(pattern_env.row(entry.rank, next.round()), legal);
        for (std::size_t i = 0; i < legal.size(); ++i) {
          entry.response.emplace_back(legal[i], pi[i]);
        }
      }
      plan.breakdown.push_back(entry);
    }
    plans.push_back(std::move(plan));
  }
  return plans;
}

PlanChoice SelectBest(std::vector<PlanEvaluation> plans, Character style) {
  if (plans.empty()) throw std::invalid_argument("no plans to choose from");
  std::sort(plans.begin(), plans.end(),
            [style](const PlanEvaluation& a, const PlanEvaluation& b) {
              if (a.expected_gain != b.expected_gain) {
                return a.expected_gain > b.expected_gain;
              }
              return StylePreference(a.action, style) <
                     StylePreference(b.action, style);
            });
  const double top = plans.front().expected_gain;
  std::size_t best = 0;
  for (std::size_t i = 1; i < plans.size(); ++i) {
    if (plans[i].expected_gain < top - kSelectTieMargin) break;
    if (StylePreference(plans[i].action, style) <
        StylePreference(plans[best].action, style)) {
      best = i;
    }
  }
  std::rotate(plans.begin(), plans.begin() + best, plans.begin() + best + 1);

  PlanChoice choice;
  choice.best = plans.front();
  std::ostringstream why;
  why << "plan " << ToString(choice.best.action) << " has the highest expected "
      << "chip gain " << Fixed(choice.best.expected_gain) << " (win "
      << Fixed(choice.best.win_rate) << ", lose " << Fixed(choice.best.lose_rate)
      << ", draw " << Fixed(choice.best.draw_rate) << ")";
  if (plans.size() > 1) {
    why << " over " << ToString(plans[1].action) << " at "
        << Fixed(plans[1].expected_gain);
  }
  why << " from a/an " << ToString(style) << " perspective";
  choice.rationale = why.str();
  choice.ranked = std::move(plans);
  return choice;
}

Action Act(const PlanChoice& choice, const ActMode& mode, Rng& rng) {
  if (!mode.sampled) return choice.best.action;
  if (!(mode.temperature > 0.0)) {
    throw std::invalid_argument("sampling temperature must be positive");
  }
  double top = -1e300;
  for (const auto& plan : choice.ranked) top = std::max(top, plan.expected_gain);
  std::vector<double> weights;
  weights.reserve(choice.ranked.size());
  for (const auto& plan : choice.ranked) {
    weights.push_back(std::exp((plan.expected_gain - top) / mode.temperature));
  }
  return choice.ranked[SampleIndex(rng, weights)].action;
}

void to_json(nlohmann::json& j, const PlanEvaluation& plan) {
  j = nlohmann::json::object();
  j["action"] = plan.action;
  j["win_rate"] = plan.win_rate;
  j["lose_rate"] = plan.lose_rate;
  j["draw_rate"] = plan.draw_rate;
  j["win_payoff"] = plan.win_payoff;
  j["lose_payoff"] = plan.lose_payoff;
  j["expected_gain"] = plan.expected_gain;
  nlohmann::json breakdown = nlohmann::json::array();
  for (const auto& b : plan.breakdown) {
    nlohmann::json response = nlohmann::json::object();
    for (const auto& [a, p] : b.response) response[std::string(ToString(a))] = p;
    breakdown.push_back({{"card", std::string(1, RankLetter(b.rank))},
                         {"weight", b.weight},
                         {"response", response},
                         {"win", b.rates.win},
                         {"lose", b.rates.lose},
                         {"draw", b.rates.draw},
                         {"expected_gain", b.expected_gain}});
  }
  j["breakdown"] = breakdown;
}

void from_json(const nlohmann::json& j, PlanEvaluation& plan) {
  plan.action = j.at("action").get<Action>();
  plan.win_rate = j.at("win_rate").get<double>();
  plan.lose_rate = j.at("lose_rate").get<double>();
  plan.draw_rate = j.at("draw_rate").get<double>();
  plan.win_payoff = j.at("win_payoff").get<int>();
  plan.lose_payoff = j.at("lose_payoff").get<int>();
  plan.expected_gain = j.at("expected_gain").get<double>();
  plan.breakdown.clear();
  for (const auto& b : j.at("breakdown")) {
    OpponentCardBreakdown entry;
    entry.rank = ParseRank(b.at("card").get<std::string>());
    entry.weight = b.at("weight").get<double>();
    for (const auto& [name, p] : b.at("response").items()) {
      entry.response.emplace_back(ParseAction(name), p.get<double>());
    }
    entry.rates = {b.at("win").get<double>(), b.at("lose").get<double>(),
                   b.at("draw").get<double>()};
    entry.expected_gain = b.at("expected_gain").get<double>();
    plan.breakdown.push_back(entry);
  }
}

void to_json(nlohmann::json& j, const PlanChoice& choice) {
  j = {{"ranked", choice.ranked},
       {"best", choice.best.action},
       {"rationale", choice.rationale}};
}

}  // namespace policyevol
