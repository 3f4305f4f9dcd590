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

#include "policyevol/belief.h"

#include <algorithm>
#include <cstdio>
#include <sstream>

namespace policyevol {
namespace {

std::string Percent(double p) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.1f%%", 100.0 * p);
  return buf;
}

// Posterior over `target` ranks given visible cards and the target's actions.
BeliefReport Infer(Card visible_card, std::optional<Card> public_card,
                   std::span<const ObservedAction> actions,
                   const PolicyTable& pattern) {
  BeliefReport report;
  RankDistribution weights = Prior(visible_card, public_card).p;
  for (const ObservedAction& step : actions) {
    EvidenceStep evidence{step.action, step.round, {}, false};
    for (Rank rank : kAllRanks) {
      double factor = pattern.prob(rank, step.round, step.action);
      if (factor < kLikelihoodFloor) {
        factor = kLikelihoodFloor;
        evidence.floored = true;
      }
      evidence.factors[RankIndex(rank)] = factor;
      weights[RankIndex(rank)] *= factor;
    }
    report.evidence.push_back(evidence);
  }
  double total = 0.0;
  for (double w : weights) total += w;
  for (int r = 0; r < kNumRanks; ++r) report.posterior[r] = weights[r] / total;
  return report;
}

std::string BestCombination(const RankDistribution& posterior,
                            std::optional<Card> public_card) {
  std::ostringstream out;
  if (public_card) {
    const Rank board = public_card->rank;
    const double pair = posterior[RankIndex(board)];
    out << "pair of " << RankName(board) << "s with probability "
        << Percent(pair);
    int best = -1;
    for (int r = kNumRanks - 1; r >= 0; --r) {
      if (r != RankIndex(board) && posterior[r] > 0.0) {
        best = r;
        break;
      }
    }
    if (best >= 0) {
      out << "; otherwise high card up to "
          << RankName(static_cast<Rank>(best));
    }
  } else {
    const int best = static_cast<int>(
        std::max_element(posterior.begin(), posterior.end()) -
        posterior.begin());
    out << "most likely " << RankName(static_cast<Rank>(best)) << " ("
        << Percent(posterior[best]) << "); a pair with the board remains "
        << "possible for any holding";
  }
  return out.str();
}

}  // namespace

CardPrior Prior(Card my_card, std::optional<Card> public_card) {
  if (public_card && *public_card == my_card) {
    throw std::invalid_argument("duplicate visible cards: " +
                                my_card.ToString());
  }
  std::array<int, kNumRanks> remaining = {kNumSuits, kNumSuits, kNumSuits};
  --remaining[RankIndex(my_card.rank)];
  if (public_card) --remaining[RankIndex(public_card->rank)];
  int total = 0;
  for (int n : remaining) total += n;
  CardPrior prior;
  for (int r = 0; r < kNumRanks; ++r) {
    prior.p[r] = static_cast<double>(remaining[r]) / total;
  }
  return prior;
}

std::vector<ObservedAction> ActionsOf(std::span<const HistoryStep> history,
                                      int player) {
  std::vector<ObservedAction> out;
  for (const HistoryStep& step : history) {
    if (step.player == player) out.push_back({step.action, step.round});
  }
  return out;
}

BeliefReport EnvironmentalBelief(const RawObservation& obs,
                                 std::span<const ObservedAction> opp_actions,
                                 const PolicyTable& pattern_env) {
  if (!pattern_env.Valid()) {
    throw std::invalid_argument("environmental pattern is not a valid table");
  }
  BeliefReport report =
      Infer(obs.hand, obs.public_card, opp_actions, pattern_env);
  report.best_combination = BestCombination(report.posterior, obs.public_card);
  return report;
}

BeliefReport PriorBelief(const RawObservation& obs) {
  BeliefReport report;
  report.posterior = Prior(obs.hand, obs.public_card).p;
  report.best_combination = BestCombination(report.posterior, obs.public_card);
  return report;
}

SelfBelief MakeSelfBelief(const RawObservation& obs,
                          std::span<const ObservedAction> my_actions,
                          const PolicyTable& pattern_self,
                          const BeliefReport& env_belief) {
  SelfBelief belief;
  for (Rank theirs : kAllRanks) {
    const double p = env_belief.posterior[RankIndex(theirs)];
    if (p == 0.0) continue;
    int cmp = 0;
    if (obs.public_card) {
      cmp = CompareHands(obs.hand.rank, theirs, obs.public_card->rank);
    } else if (obs.hand.rank != theirs) {
      cmp = RankIndex(obs.hand.rank) > RankIndex(theirs) ? 1 : -1;
    }
    (cmp > 0 ? belief.win_now : cmp < 0 ? belief.lose_now : belief.draw_now) +=
        p;
  }

  // Second-order view: what the opponent can infer about us from our own
  // actions, seeing only the board.
  RankDistribution view = {1.0, 1.0, 1.0};
  if (obs.public_card) view[RankIndex(obs.public_card->rank)] = 0.5;
  for (const ObservedAction& step : my_actions) {
    for (Rank rank : kAllRanks) {
      view[RankIndex(rank)] *= std::max(
          pattern_self.prob(rank, step.round, step.action), kLikelihoodFloor);
    }
  }
  const double view_total = view[0] + view[1] + view[2];
  for (double& v : view) v /= view_total;
  belief.opponent_view = view;

  std::ostringstream adv;
  adv << "Holding " << obs.hand.LongName();
  if (obs.public_card) {
    adv << (obs.hand.rank == obs.public_card->rank ? " paired with the board"
                                                   : " unpaired")
        << " (board " << obs.public_card->LongName() << ")";
  } else {
    adv << " before the board card";
  }
  adv << ": showdown now wins " << Percent(belief.win_now) << ", draws "
      << Percent(belief.draw_now) << ", loses " << Percent(belief.lose_now)
      << ".";
  belief.advantages = adv.str();

  std::ostringstream note;
  note << "Opponent likely reads us as J " << Percent(view[0]) << ", Q "
       << Percent(view[1]) << ", K " << Percent(view[2]) << "; chips committed "
       << obs.my_chips << " of " << obs.all_chips[0] + obs.all_chips[1] << ".";
  belief.long_term_note = note.str();
  return belief;
}

void to_json(nlohmann::json& j, const BeliefReport& report) {
  j = nlohmann::json::object();
  j["posterior"] = {{"J", report.posterior[0]},
                    {"Q", report.posterior[1]},
                    {"K", report.posterior[2]}};
  j["best_combination"] = report.best_combination;
  nlohmann::json evidence = nlohmann::json::array();
  for (const auto& e : report.evidence) {
    evidence.push_back({{"action", e.action},
                        {"round", std::string(ToString(e.round))},
                        {"factors", e.factors},
                        {"floored", e.floored}});
  }
  j["evidence"] = evidence;
}

void from_json(const nlohmann::json& j, BeliefReport& report) {
  const auto& post = j.at("posterior");
  report.posterior = {post.at("J").get<double>(), post.at("Q").get<double>(),
                      post.at("K").get<double>()};
  report.best_combination = j.value("best_combination", "");
  report.evidence.clear();
  if (j.contains("evidence")) {
    for (const auto& e : j.at("evidence")) {
      EvidenceStep step;
      step.action = e.at("action").get<Action>();
      step.round = e.at("round").get<std::string>() == "pre_reveal"
                       ? Round::kPreReveal
                       : Round::kPostReveal;
      step.factors = e.at("factors").get<RankDistribution>();
      step.floored = e.at("floored").get<bool>();
      report.evidence.push_back(step);
    }
  }
}

void to_json(nlohmann::json& j, const SelfBelief& belief) {
  j = {{"win_now", belief.win_now},
       {"draw_now", belief.draw_now},
       {"lose_now", belief.lose_now},
       {"advantages", belief.advantages},
       {"long_term_note", belief.long_term_note},
       {"opponent_view", belief.opponent_view}};
}

}  // namespace policyevol
