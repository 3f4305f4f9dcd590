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

#ifndef POLICYEVOL_AGENT_H_
#define POLICYEVOL_AGENT_H_

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "policyevol/belief.h"
#include "policyevol/memory.h"
#include "policyevol/plan.h"
#include "policyevol/policy.h"
#include "policyevol/reasoner.h"
#include "policyevol/reflection.h"
#include "policyevol/rng.h"

namespace policyevol {

class Agent {
 public:
  virtual ~Agent() = default;
  virtual std::string name() const = 0;
  // Must return one of context.observation.legal_actions.
  virtual Action Decide(const DecisionContext& context, Rng& rng) = 0;
  // Called once per finished game with the record seen from this agent's
  // seat.
  virtual void EndGame(const GameRecord& /*record*/) {}
  // Trace of the last Decide / EndGame call; null when none is kept.
  virtual nlohmann::json LastDecisionTrace() const { return nullptr; }
  virtual nlohmann::json LastGameTrace() const { return nullptr; }
  virtual bool reproducible() const { return true; }
};

struct Ablations {
  bool policy = false;
  bool belief = false;
  bool plan = false;
  bool reflection = false;

  bool any() const { return policy || belief || plan || reflection; }
  std::string ToString() const;  // "none" or e.g. "belief+plan"
  // Accepts "none", or '+'/','-separated stage names.
  static Ablations Parse(std::string_view text);
  friend bool operator==(const Ablations&, const Ablations&) = default;
};

struct AgentConfig {
  std::string name = "board_game_expert";
  std::string opponent_name = "GoodGuy";
  Ablations ablate;
  int evolve_every = 1;
  EvolutionParams params;
  std::optional<std::size_t> history_window;
  // Past games summarized into the long-memory prompt slot.
  int memory_in_prompt = 3;
  ActMode act_mode;
  Lookahead lookahead = Lookahead::kMaximize;
  // When unset the self pattern's character breaks plan ties.
  std::optional<Character> style;
};

struct DecisionTrace {
  int game_index = 0;
  std::string observation_text;
  std::optional<BeliefReport> env_belief;
  std::optional<SelfBelief> self_belief;
  std::optional<PlanChoice> plans;
  Action action = Action::kFold;
  // Stage name to provenance (llm / scripted / fallback).
  std::map<std::string, std::string> provenance;
  std::vector<std::string> errors;
};

struct EvolutionTrace {
  int game_index = 0;
  bool evolved = false;  // cadence reached and policy stage enabled
  double env_max_tv = 0.0;
  bool env_triggered = false;
  bool self_triggered = false;
  Character env_character = Character::kNeutral;
  Character self_character = Character::kNeutral;
  std::optional<ReflectionNote> reflection;
  std::map<std::string, std::string> provenance;
  std::vector<std::string> errors;
};

void to_json(nlohmann::json& j, const DecisionTrace& trace);
void to_json(nlohmann::json& j, const EvolutionTrace& trace);

class PolicyEvolAgent : public Agent {
 public:
  // `reasoner` is shared so that several agents can use one backend.
  PolicyEvolAgent(AgentConfig config, std::shared_ptr<Reasoner> reasoner);

  std::string name() const override { return config_.name; }
  Action Decide(const DecisionContext& context, Rng& rng) override;
  void EndGame(const GameRecord& record) override;
  nlohmann::json LastDecisionTrace() const override;
  nlohmann::json LastGameTrace() const override;
  bool reproducible() const override { return reasoner_->reproducible(); }

  // Decide with the full trace returned.
  std::pair<Action, DecisionTrace> DecideTraced(const DecisionContext& context,
                                                Rng& rng);

  const PatternReport& env_pattern() const { return env_pattern_; }
  const PatternReport& self_pattern() const { return self_pattern_; }
  const MemoryStore& memory() const { return memory_; }
  const AgentConfig& config() const { return config_; }
  const std::vector<ReflectionNote>& reflections() const {
    return reflections_;
  }

  // Warm start; throws std::invalid_argument on an invalid table.
  void SetPatterns(PatternReport env, PatternReport self);

 private:
  Placeholders BasePlaceholders() const;
  std::string LongMemory() const;
  ReasonerResponse Ask(RequestKind kind, Placeholders placeholders,
                       RequestInput input, const std::string& stage,
                       std::map<std::string, std::string>& provenance,
                       std::vector<std::string>& errors);

  AgentConfig config_;
  std::shared_ptr<Reasoner> reasoner_;
  PatternReport env_pattern_;
  PatternReport self_pattern_;
  MemoryStore memory_;
  std::vector<ReflectionNote> reflections_;
  int games_since_evolve_ = 0;
  std::optional<DecisionTrace> last_decision_;
  std::optional<EvolutionTrace> last_game_;
};

// Text of the current game's public betting so far, from `seat`'s view.
std::string DescribeProgress(std::span<const HistoryStep> history, int seat,
                             std::string_view me, std::string_view opponent);

}  // namespace policyevol

#endif  // POLICYEVOL_AGENT_H_
