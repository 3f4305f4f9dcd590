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

#include "policyevol/reflection.h"

#include <cstdio>
#include <sstream>

namespace policyevol {
namespace {

constexpr double kWrongMargin = 1e-9;

std::string Chips(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

}  // namespace

ReflectionNote Reflect(const GameRecord& record,
                       const PolicyTable& pattern_env) {
  ReflectionNote note;
  note.game_index = record.game_index;
  const int self = record.self_seat;
  const Card theirs = record.revealed_cards[record.opponent_seat()];
  std::vector<HistoryStep> history;
  for (std::size_t i = 0; i < record.steps.size(); ++i) {
    const RecordStep& step = record.steps[i];
    if (step.player == self) {
      DecisionContext context{step.observation, self, record.small_blind,
                              record.rules, history};
      PlanOptions options;
      options.known_opponent_card = theirs;
      const auto plans = EnumeratePlans(context, {1.0 / 3, 1.0 / 3, 1.0 / 3},
                                        pattern_env, pattern_env, options);
      const PlanEvaluation* taken = nullptr;
      const PlanEvaluation* best = nullptr;
      for (const auto& plan : plans) {
        if (plan.action == step.action) taken = &plan;
        if (best == nullptr || plan.expected_gain > best->expected_gain) {
          best = &plan;
        }
      }
      StepVerdict verdict;
      verdict.step_index = static_cast<int>(i);
      verdict.action = step.action;
      const double gap = best->expected_gain - taken->expected_gain;
      std::ostringstream why;
      why << ToString(step.action) << " with " << step.observation.hand.ToString()
          << " against " << theirs.ToString() << " was worth "
          << Chips(taken->expected_gain);
      if (gap > kWrongMargin) {
        verdict.right = false;
        verdict.counterfactual = gap;
        verdict.better = best->action;
        why << ", " << ToString(best->action) << " would have been worth "
            << Chips(best->expected_gain);
      } else {
        why << ", no alternative did better";
      }
      verdict.reason = why.str();
      note.verdicts.push_back(std::move(verdict));
    } else {
      std::ostringstream line;
      line << "opponent chose " << ToString(step.action) << " holding "
           << theirs.ToString() << " in " << ToString(step.round)
           << "; the current pattern gives that "
           << Chips(pattern_env.prob(theirs.rank, step.round, step.action));
      note.opponent_motivation.push_back(line.str());
    }
    history.push_back({step.player, step.action, step.round});
  }
  return note;
}

std::string Summarize(const GameRecord& record, const ReflectionNote& note) {
  std::ostringstream out;
  const int self = record.self_seat;
  out << "Game " << record.game_index << ": held "
      << record.revealed_cards[self].ToString() << ", opponent held "
      << record.revealed_cards[record.opponent_seat()].ToString();
  if (record.public_card) out << ", board " << record.public_card->ToString();
  out << "; actions";
  for (const RecordStep& step : record.steps) {
    out << ' ' << (step.player == self ? "me:" : "opp:")
        << ToString(step.action);
  }
  out << "; net " << record.outcome.net[self] << " chips.";
  for (const StepVerdict& v : note.verdicts) {
    if (!v.right) out << " Mistake: " << v.reason << '.';
  }
  return out.str();
}

void to_json(nlohmann::json& j, const StepVerdict& verdict) {
  j = {{"step", verdict.step_index},
       {"action", verdict.action},
       {"verdict", verdict.right ? "right" : "wrong"},
       {"reason", verdict.reason},
       {"counterfactual", verdict.counterfactual}};
  if (verdict.better) j["better"] = *verdict.better;
}

void from_json(const nlohmann::json& j, StepVerdict& verdict) {
  verdict.step_index = j.at("step").get<int>();
  verdict.action = j.at("action").get<Action>();
  verdict.right = j.at("verdict").get<std::string>() == "right";
  verdict.reason = j.at("reason").get<std::string>();
  verdict.counterfactual = j.at("counterfactual").get<double>();
  verdict.better.reset();
  if (j.contains("better")) verdict.better = j.at("better").get<Action>();
}

void to_json(nlohmann::json& j, const ReflectionNote& note) {
  j = {{"game_index", note.game_index},
       {"verdicts", note.verdicts},
       {"opponent_motivation", note.opponent_motivation}};
}

void from_json(const nlohmann::json& j, ReflectionNote& note) {
  note.game_index = j.at("game_index").get<int>();
  note.verdicts = j.at("verdicts").get<std::vector<StepVerdict>>();
  note.opponent_motivation =
      j.at("opponent_motivation").get<std::vector<std::string>>();
}

}  // namespace policyevol
