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

#ifndef POLICYEVOL_REASONER_H_
#define POLICYEVOL_REASONER_H_

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "policyevol/belief.h"
#include "policyevol/memory.h"
#include "policyevol/plan.h"
#include "policyevol/policy.h"
#include "policyevol/reflection.h"

namespace policyevol {

enum class RequestKind : std::uint8_t {
  kInterpret,
  kPatternEnv,
  kPatternSelf,
  kBeliefEnv,
  kBeliefSelf,
  kPlan,
  kReflect,
};
std::string_view ToString(RequestKind kind);

// Prompt template for a request kind. Reflect shares the self-pattern
// template, whose first task is the per-step reflection.
std::string_view TemplateFor(RequestKind kind);
// Placeholder names in order of first appearance.
std::vector<std::string> TemplatePlaceholders(std::string_view tmpl);

using Placeholders = std::map<std::string, std::string>;

class TemplateError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Substitutes every {name}; throws TemplateError naming the missing ones.
// Unused entries are ignored.
std::string RenderTemplate(std::string_view tmpl, const Placeholders& values);

// Rule texts handed to the model, written for this project.
std::string_view GameRuleText();
std::string_view ObservationRuleText();
inline constexpr std::string_view kGameName = "Leduc Hold'em Poker Limit";

// Typed inputs: what the scripted path computes from.
struct InterpretInput {
  RawObservation observation;
};
struct PatternEnvInput {
  PatternReport old_pattern;
  HistoryDigest digest;
  EvolutionParams params;
};
struct PatternSelfInput {
  PatternReport env_pattern;
  PatternReport old_self;
  HistoryDigest digest;
  EvolutionParams params;
  bool shift_to_best_response = true;
};
struct BeliefEnvInput {
  RawObservation observation;
  std::vector<ObservedAction> opponent_actions;
  PolicyTable pattern_env;
};
struct BeliefSelfInput {
  RawObservation observation;
  std::vector<ObservedAction> my_actions;
  PolicyTable pattern_self;
  BeliefReport env_belief;
};
struct PlanInput {
  DecisionContext context;
  RankDistribution posterior{};
  PolicyTable pattern_env;
  PolicyTable pattern_self;
  PlanOptions options;
  Character style = Character::kNeutral;
};
struct ReflectInput {
  GameRecord record;
  PolicyTable pattern_env;
};

using RequestInput =
    std::variant<InterpretInput, PatternEnvInput, PatternSelfInput,
                 BeliefEnvInput, BeliefSelfInput, PlanInput, ReflectInput>;

struct ReasonerRequest {
  RequestKind kind = RequestKind::kInterpret;
  Placeholders placeholders;
  RequestInput input;
};

// Throws std::invalid_argument when the input alternative does not match
// the kind or a template placeholder is missing.
void Validate(const ReasonerRequest& request);

enum class Provenance : std::uint8_t { kLlm, kScripted, kFallback };
std::string_view ToString(Provenance provenance);

// Numbers read back from a model's plan text.
struct PlanReading {
  std::vector<std::pair<Action, double>> gains;
  Action selected = Action::kFold;
};

using Payload = std::variant<std::monostate, PatternReport, BeliefReport,
                             SelfBelief, PlanChoice, ReflectionNote>;

struct ReasonerResponse {
  std::string text;
  Payload structured;
  Provenance provenance = Provenance::kScripted;
  std::optional<PlanReading> plan_reading;
  // Last failure cause when provenance is kFallback.
  std::string error;
};

class Reasoner {
 public:
  virtual ~Reasoner() = default;
  // Never throws for a valid request: failures resolve to a fallback.
  virtual ReasonerResponse Complete(const ReasonerRequest& request) = 0;
  // False when outputs depend on an external model.
  virtual bool reproducible() const = 0;
  virtual std::string name() const = 0;
};

// Numeric answer for any request kind; pure.
ReasonerResponse ScriptedAnswer(const ReasonerRequest& request);

class ScriptedReasoner : public Reasoner {
 public:
  ReasonerResponse Complete(const ReasonerRequest& request) override {
    return ScriptedAnswer(request);
  }
  bool reproducible() const override { return true; }
  std::string name() const override { return "scripted"; }
};

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ExtractedDistribution {
  std::vector<double> probs;  // aligned with the requested labels
  bool partial = false;
  std::vector<std::string> unmatched;
};

// Reads "label (p%)" and "label (0.p)" spans. Synonyms (Jack, raises,
// bet, ...) map onto the canonical labels case-insensitively; the first
// span per label wins. Throws ParseError on zero usable spans.
ExtractedDistribution ExtractDistribution(
    std::string_view text, const std::vector<std::string>& labels);

// Readers for model output; each throws ParseError when nothing usable is
// found. `fallback` supplies whatever the text does not cover.
PatternReport ReadPatternText(std::string_view text,
                              const PatternReport& fallback);
BeliefReport ReadBeliefText(std::string_view text,
                            const BeliefReport& fallback);
PlanReading ReadPlanText(std::string_view text,
                         std::span<const Action> legal);
ReflectionNote ReadReflectionText(std::string_view text,
                                  const ReflectionNote& fallback);

// Turns model text into a payload for the request, using the scripted
// answer for the fields the text does not carry. Throws ParseError.
ReasonerResponse InterpretModelText(const ReasonerRequest& request,
                                    std::string text);

// Rendered prompt for the request.
std::string RenderPrompt(const ReasonerRequest& request);

// Textual forms used both as scripted output and as placeholder values.
std::string DescribeObservation(const RawObservation& observation);
std::string DescribePattern(const PolicyTable& table, Character character,
                            std::string_view who);
std::string DescribeBelief(const BeliefReport& belief, std::string_view who);
std::string DescribePlans(const PlanChoice& choice);

void to_json(nlohmann::json& j, const ReasonerResponse& response);

}  // namespace policyevol

#endif  // POLICYEVOL_REASONER_H_
