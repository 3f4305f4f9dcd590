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

#include "policyevol/agent.h"

#include <fmt/format.h>

#include <sstream>

namespace policyevol {
namespace {

std::string PythonList(std::span<const Action> actions) {
  std::string out = "[";
  for (std::size_t i = 0; i < actions.size(); ++i) {
    out += fmt::format("{}'{}'", i == 0 ? "" : ", ", ToString(actions[i]));
  }
  return out + "]";
}

void Require(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(what);
}

}  // namespace

std::string Ablations::ToString() const {
  std::string out;
  auto add = [&](bool on, const char* stage) {
    if (on) out += (out.empty() ? "" : "+") + std::string(stage);
  };
  add(policy, "policy");
  add(belief, "belief");
  add(plan, "plan");
  add(reflection, "reflection");
  return out.empty() ? "none" : out;
}

Ablations Ablations::Parse(std::string_view text) {
  Ablations a;
  if (text.empty() || text == "none") return a;
  std::string token;
  auto flush = [&] {
    if (token == "policy") {
      a.policy = true;
    } else if (token == "belief") {
      a.belief = true;
    } else if (token == "plan") {
      a.plan = true;
    } else if (token == "reflection") {
      a.reflection = true;
    } else if (!token.empty()) {
      throw std::invalid_argument("unknown ablation: " + token);
    }
    token.clear();
  };
  for (char c : text) {
    if (c == '+' || c == ',') {
      flush();
    } else {
      token += c;
    }
  }
  flush();
  return a;
}

std::string DescribeProgress(std::span<const HistoryStep> history, int seat,
                             std::string_view me, std::string_view opponent) {
  if (history.empty()) return "No actions yet in this game.";
  std::string out;
  Round round = Round::kPreReveal;
  for (const HistoryStep& step : history) {
    if (step.round != round) {
      out += " The public card was revealed.";
      round = step.round;
    }
    out += fmt::format("{}{} chose {}.", out.empty() ? "" : " ",
                       step.player == seat ? me : opponent,
                       ToString(step.action));
  }
  return out;
}

void to_json(nlohmann::json& j, const DecisionTrace& trace) {
  j = {{"observation", trace.observation_text},
       {"action", trace.action},
       {"provenance", trace.provenance}};
  if (trace.env_belief) j["env_belief"] = *trace.env_belief;
  if (trace.self_belief) j["self_belief"] = *trace.self_belief;
  if (trace.plans) j["plans"] = *trace.plans;
  if (!trace.errors.empty()) j["errors"] = trace.errors;
}

void to_json(nlohmann::json& j, const EvolutionTrace& trace) {
  j = {{"evolved", trace.evolved},
       {"env_max_tv", trace.env_max_tv},
       {"env_triggered", trace.env_triggered},
       {"self_triggered", trace.self_triggered},
       {"env_character", ToString(trace.env_character)},
       {"self_character", ToString(trace.self_character)},
       {"provenance", trace.provenance}};
  if (trace.reflection) j["reflection"] = *trace.reflection;
  if (!trace.errors.empty()) j["errors"] = trace.errors;
}

PolicyEvolAgent::PolicyEvolAgent(AgentConfig config,
                                 std::shared_ptr<Reasoner> reasoner)
    : config_(std::move(config)),
      reasoner_(std::move(reasoner)),
      env_pattern_(UniformPattern()),
      self_pattern_(UniformPattern()) {
  Require(reasoner_ != nullptr, "agent needs a reasoner");
  Require(config_.evolve_every >= 1, "evolve_every must be >= 1");
  Require(config_.params.lambda >= 0.0 && config_.params.lambda <= 1.0,
          "lambda must lie in [0, 1]");
}

void PolicyEvolAgent::SetPatterns(PatternReport env, PatternReport self) {
  Require(env.table.Valid() && self.table.Valid(), "invalid pattern table");
  env_pattern_ = std::move(env);
  self_pattern_ = std::move(self);
}

Placeholders PolicyEvolAgent::BasePlaceholders() const {
  return {{"agent_name", config_.name},
          {"initiator_name", config_.name},
          {"recipient_name", config_.opponent_name},
          {"game_name", std::string(kGameName)},
          {"rule", std::string(GameRuleText())},
          {"observation_rule", std::string(ObservationRuleText())},
          {"long_memory", LongMemory()}};
}

std::string PolicyEvolAgent::LongMemory() const {
  const std::size_t n = memory_.size();
  const std::size_t k =
      std::min(n, static_cast<std::size_t>(std::max(0, config_.memory_in_prompt)));
  if (k == 0) return "No previous games.";
  std::string out;
  for (std::size_t i = n - k; i < n; ++i) {
    const GameRecord& record = memory_.at(i);
    ReflectionNote note;
    for (const auto& r : reflections_) {
      if (r.game_index == record.game_index) note = r;
    }
    out += (out.empty() ? "" : "\n") + Summarize(record, note);
  }
  return out;
}

ReasonerResponse PolicyEvolAgent::Ask(
    RequestKind kind, Placeholders placeholders, RequestInput input,
    const std::string& stage, std::map<std::string, std::string>& provenance,
    std::vector<std::string>& errors) {
  ReasonerRequest request{kind, std::move(placeholders), std::move(input)};
  ReasonerResponse response = reasoner_->Complete(request);
  provenance[stage] = std::string(ToString(response.provenance));
  if (!response.error.empty()) errors.push_back(stage + ": " + response.error);
  return response;
}

std::pair<Action, DecisionTrace> PolicyEvolAgent::DecideTraced(
    const DecisionContext& context, Rng& rng) {
  const RawObservation& obs = context.observation;
  Require(!obs.legal_actions.empty(), "no legal action to choose from");
  DecisionTrace trace;
  trace.game_index = static_cast<int>(memory_.size());
  auto& prov = trace.provenance;
  auto& errors = trace.errors;

  Placeholders base = BasePlaceholders();
  base["user_index"] = std::to_string(context.seat);
  base["valid_action_list"] = PythonList(obs.legal_actions);
  base["recent_observations"] = DescribeProgress(
      context.history, context.seat, config_.name, config_.opponent_name);

  // Interpretation.
  Placeholders p = base;
  p["observation"] = obs.ToPythonRepr();
  trace.observation_text =
      Ask(RequestKind::kInterpret, p, InterpretInput{obs}, "interpret", prov,
          errors)
          .text;
  base["observation"] = trace.observation_text;

  const std::string env_text = DescribePattern(
      env_pattern_.table, env_pattern_.character, config_.opponent_name);
  const std::string self_text =
      DescribePattern(self_pattern_.table, self_pattern_.character, "I");

  // Beliefs, environment first.
  BeliefReport env_belief = PriorBelief(obs);
  std::string belief_text;
  if (!config_.ablate.belief) {
    p = base;
    p["pattern"] = env_text;
    auto response = Ask(RequestKind::kBeliefEnv, p,
                        BeliefEnvInput{obs, ActionsOf(context.history,
                                                      1 - context.seat),
                                       env_pattern_.table},
                        "env_belief", prov, errors);
    env_belief = std::get<BeliefReport>(response.structured);
    belief_text = response.text;
    trace.env_belief = env_belief;

    p = base;
    p["pattern"] = self_text;
    p["oppo_pattern"] = env_text;
    p["oppo_belief"] = belief_text;
    response = Ask(RequestKind::kBeliefSelf, p,
                   BeliefSelfInput{obs, ActionsOf(context.history, context.seat),
                                   self_pattern_.table, env_belief},
                   "self_belief", prov, errors);
    trace.self_belief = std::get<SelfBelief>(response.structured);
    belief_text += "\n" + response.text;
  } else {
    belief_text = DescribeBelief(env_belief, config_.opponent_name);
  }

  // Plan and act.
  Action action;
  if (!config_.ablate.plan) {
    p = base;
    p["pattern"] = env_text + "\n" + self_text;
    p["belief"] = belief_text;
    PlanOptions options;
    options.lookahead = config_.lookahead;
    auto response = Ask(
        RequestKind::kPlan, p,
        PlanInput{context, env_belief.posterior, env_pattern_.table,
                  self_pattern_.table, options,
                  config_.style.value_or(self_pattern_.character)},
        "plan", prov, errors);
    trace.plans = std::get<PlanChoice>(response.structured);
    action = Act(*trace.plans, config_.act_mode, rng);
  } else {
    const Round round = obs.public_card ? Round::kPostReveal : Round::kPreReveal;
    const auto pi = RestrictToLegal(
        self_pattern_.table.row(obs.hand.rank, round), obs.legal_actions);
    action = obs.legal_actions[SampleIndex(rng, pi)];
    prov["plan"] = "self_pattern";
  }
  trace.action = action;
  return {action, std::move(trace)};
}

Action PolicyEvolAgent::Decide(const DecisionContext& context, Rng& rng) {
  auto [action, trace] = DecideTraced(context, rng);
  last_decision_ = std::move(trace);
  return action;
}

void PolicyEvolAgent::EndGame(const GameRecord& record) {
  EvolutionTrace trace;
  trace.game_index = record.game_index;
  auto& prov = trace.provenance;
  auto& errors = trace.errors;
  memory_.Append(record);

  Placeholders base = BasePlaceholders();
  base["cshort_summarization"] =
      DescribeProgress(ReplayRecord(record).history(), record.self_seat,
                       config_.name, config_.opponent_name);
  base["old_opponent_pattern"] = DescribePattern(
      env_pattern_.table, env_pattern_.character, config_.opponent_name);
  base["old_self_pattern"] =
      DescribePattern(self_pattern_.table, self_pattern_.character, "I");
  base["opponent_pattern"] = base["old_opponent_pattern"];

  if (!config_.ablate.reflection) {
    auto response = Ask(RequestKind::kReflect, base,
                        ReflectInput{record, env_pattern_.table}, "reflect",
                        prov, errors);
    trace.reflection = std::get<ReflectionNote>(response.structured);
    reflections_.push_back(*trace.reflection);
  }

  if (!config_.ablate.policy && ++games_since_evolve_ >= config_.evolve_every) {
    games_since_evolve_ = 0;
    trace.evolved = true;
    // Work on copies; the live patterns change only once both succeed.
    try {
      const HistoryDigest digest =
          Digest(memory_, TrailingWindow(memory_.size(), config_.history_window));
      const auto& prm = config_.params;
      const DivergenceFinding env_finding = Diverge(
          env_pattern_.table,
          Detect(digest, Role::kOpponent, prm.alpha, env_pattern_.table)
              .MergedWith(env_pattern_.table),
          prm.tau);
      trace.env_max_tv = env_finding.max_tv;
      trace.env_triggered = env_finding.triggered;
      PatternReport next_env = env_pattern_;
      if (env_finding.triggered) {
        next_env = std::get<PatternReport>(
            Ask(RequestKind::kPatternEnv, base,
                PatternEnvInput{env_pattern_, digest, prm}, "pattern_env", prov,
                errors)
                .structured);
      }
      const DivergenceFinding self_finding = Diverge(
          self_pattern_.table,
          Detect(digest, Role::kSelf, prm.alpha, self_pattern_.table)
              .MergedWith(self_pattern_.table),
          prm.tau);
      trace.self_triggered = self_finding.triggered;
      PatternReport next_self = self_pattern_;
      if (env_finding.triggered || self_finding.triggered) {
        Placeholders p = base;
        p["opponent_pattern"] = DescribePattern(
            next_env.table, next_env.character, config_.opponent_name);
        next_self = std::get<PatternReport>(
            Ask(RequestKind::kPatternSelf, p,
                PatternSelfInput{next_env, self_pattern_, digest, prm,
                                 !config_.ablate.reflection},
                "pattern_self", prov, errors)
                .structured);
      }
      Require(next_env.table.Valid() && next_self.table.Valid(),
              "evolution produced an invalid table");
      env_pattern_ = std::move(next_env);
      self_pattern_ = std::move(next_self);
    } catch (const std::exception& e) {
      errors.push_back(std::string("evolution: ") + e.what());
    }
  }
  trace.env_character = env_pattern_.character;
  trace.self_character = self_pattern_.character;
  last_game_ = std::move(trace);
}

nlohmann::json PolicyEvolAgent::LastDecisionTrace() const {
  return last_decision_ ? nlohmann::json(*last_decision_) : nlohmann::json();
}

nlohmann::json PolicyEvolAgent::LastGameTrace() const {
  return last_game_ ? nlohmann::json(*last_game_) : nlohmann::json();
}

}  // namespace policyevol
