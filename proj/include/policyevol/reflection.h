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

#ifndef POLICYEVOL_REFLECTION_H_
#define POLICYEVOL_REFLECTION_H_

#include <optional>
#include <string>
#include <vector>

#include "policyevol/memory.h"
#include "policyevol/plan.h"
#include "policyevol/policy.h"

namespace policyevol {

// Post-game judgement of one of our own decisions.
struct StepVerdict {
  int step_index = 0;  // index into GameRecord::steps
  Action action = Action::kFold;
  bool right = true;
  std::string reason;
  // Expected chips forgone by the action relative to the best alternative.
  double counterfactual = 0.0;
  std::optional<Action> better;
};

struct ReflectionNote {
  int game_index = 0;
  std::vector<StepVerdict> verdicts;
  std::vector<std::string> opponent_motivation;
};

// Scripted hindsight review. Each own step is re-evaluated by expectimax with
// the opponent's revealed card, the board as seen at that step, and
// `pattern_env` driving the opponent's replies. An action is wrong iff some
// alternative was worth more.
ReflectionNote Reflect(const GameRecord& record, const PolicyTable& pattern_env);

// Human-readable summary used as the long-term memory text in prompts.
std::string Summarize(const GameRecord& record, const ReflectionNote& note);

void to_json(nlohmann::json& j, const StepVerdict& verdict);
void from_json(const nlohmann::json& j, StepVerdict& verdict);
void to_json(nlohmann::json& j, const ReflectionNote& note);
void from_json(const nlohmann::json& j, ReflectionNote& note);

}  // namespace policyevol

#endif  // POLICYEVOL_REFLECTION_H_
