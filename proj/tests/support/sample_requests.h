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

// Reasoner requests of every kind built from seeded random material, and an
// LLM reasoner wired to a stub transport.

#ifndef POLICYEVOL_TESTS_SUPPORT_SAMPLE_REQUESTS_H_
#define POLICYEVOL_TESTS_SUPPORT_SAMPLE_REQUESTS_H_

#include <memory>
#include <vector>

#include "policyevol/belief.h"
#include "policyevol/llm_backend.h"
#include "policyevol/reasoner.h"
#include "support/case_studies.h"
#include "support/random_instances.h"
#include "support/stub_transport.h"
#include "support/synthetic_games.h"

namespace policyevol::testing {

inline RawObservation SeventhGameFirstObservation() {
  const auto game = CaseStudyGames()[0];
  const GameState s =
      NewGameWithDeal(game.deal, game.small_blind, CaseStudyRules());
  return Observe(s, s.to_act());
}

inline ReasonerRequest SampleRequest(RequestKind kind, std::uint64_t seed = 5) {
  Rng rng(seed);
  const PolicyTable env = RandomTable(rng);
  const PolicyTable self = RandomTable(rng);
  const auto records = PlayTableGames(40, seed, self, env);
  const HistoryDigest digest = Digest(records, {0, records.size()});
  const auto spot = RandomDecisionSpot(rng);
  const RawObservation& obs = spot.context.observation;
  const auto opp = ActionsOf(spot.context.history, 1 - spot.context.seat);
  const auto mine = ActionsOf(spot.context.history, spot.context.seat);

  ReasonerRequest request;
  request.kind = kind;
  request.placeholders = GoldenPlaceholders();
  PatternReport env_report{env, ClassifyCharacter(env), ""};
  PatternReport self_report{self, ClassifyCharacter(self), ""};
  switch (kind) {
    case RequestKind::kInterpret:
      request.input = InterpretInput{SeventhGameFirstObservation()};
      break;
    case RequestKind::kPatternEnv:
      request.input = PatternEnvInput{env_report, digest, {}};
      break;
    case RequestKind::kPatternSelf:
      request.input = PatternSelfInput{env_report, self_report, digest, {},
                                       true};
      break;
    case RequestKind::kBeliefEnv:
      request.input = BeliefEnvInput{obs, opp, env};
      break;
    case RequestKind::kBeliefSelf:
      request.input = BeliefSelfInput{
          obs, mine, self, EnvironmentalBelief(obs, opp, env)};
      break;
    case RequestKind::kPlan:
      request.input =
          PlanInput{spot.context, EnvironmentalBelief(obs, opp, env).posterior,
                    env, self, {}, Character::kNeutral};
      break;
    case RequestKind::kReflect:
      request.input = ReflectInput{records[3], env};
      break;
  }
  return request;
}

struct StubbedLlm {
  std::shared_ptr<std::vector<SentRequest>> sent =
      std::make_shared<std::vector<SentRequest>>();
  std::vector<double> sleeps;
  std::unique_ptr<LlmReasoner> reasoner;

  explicit StubbedLlm(std::vector<HttpReply> replies, BackendConfig config = {}) {
    config.rate_per_minute = 0.0;
    reasoner = std::make_unique<LlmReasoner>(
        config, std::make_unique<StubTransport>(std::move(replies), sent),
        [this](std::chrono::duration<double> d) { sleeps.push_back(d.count()); });
  }

  std::string UserMessage(std::size_t i = 0) const {
    const auto body = nlohmann::json::parse(sent->at(i).body);
    return body["messages"][1]["content"].get<std::string>();
  }
};

}  // namespace policyevol::testing

#endif  // POLICYEVOL_TESTS_SUPPORT_SAMPLE_REQUESTS_H_
