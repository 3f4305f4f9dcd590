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

#include <gtest/gtest.h>

#include "oracles/bayes_oracle.h"
#include "support/random_instances.h"

namespace policyevol {
namespace {

RawObservation Obs(const char* hand, std::optional<const char*> board) {
  RawObservation obs;
  obs.hand = Card::Parse(hand);
  if (board) obs.public_card = Card::Parse(*board);
  obs.all_chips = {2, 2};
  obs.my_chips = 2;
  obs.legal_actions = {Action::kRaise, Action::kFold, Action::kCheck};
  return obs;
}

PolicyTable RaiseTable(double j, double q, double k) {
  PolicyTable t;
  t.SetRow(Rank::kJack, {j, 1 - j, 0, 0});
  t.SetRow(Rank::kQueen, {q, 1 - q, 0, 0});
  t.SetRow(Rank::kKing, {k, 1 - k, 0, 0});
  return t;
}

TEST(PriorTest, DeckCounting) {
  const auto p = Prior(Card::Parse("HJ"), std::nullopt).p;
  EXPECT_DOUBLE_EQ(p[0], 0.2);
  EXPECT_DOUBLE_EQ(p[1], 0.4);
  EXPECT_DOUBLE_EQ(p[2], 0.4);
  const auto q = Prior(Card::Parse("HJ"), Card::Parse("SJ")).p;
  EXPECT_DOUBLE_EQ(q[0], 0.0);
  EXPECT_DOUBLE_EQ(q[1], 0.5);
  EXPECT_DOUBLE_EQ(q[2], 0.5);
  EXPECT_THROW(Prior(Card::Parse("HJ"), Card::Parse("HJ")),
               std::invalid_argument);
}

TEST(PriorTest, NormalizedForAllCombinations) {
  for (int mine = 0; mine < kNumCards; ++mine) {
    const auto none = Prior(Card::FromIndex(mine), std::nullopt).p;
    EXPECT_NEAR(none[0] + none[1] + none[2], 1.0, 1e-12);
    for (int pub = 0; pub < kNumCards; ++pub) {
      if (pub == mine) continue;
      const auto p = Prior(Card::FromIndex(mine), Card::FromIndex(pub)).p;
      EXPECT_NEAR(p[0] + p[1] + p[2], 1.0, 1e-12);
    }
  }
}

TEST(EnvironmentalBeliefTest, UniformPatternGivesPrior) {
  const auto obs = Obs("SQ", "HK");
  const std::vector<ObservedAction> acts = {{Action::kRaise, Round::kPreReveal},
                                            {Action::kCall, Round::kPostReveal}};
  const auto report = EnvironmentalBelief(obs, acts, PolicyTable());
  const auto prior = Prior(obs.hand, obs.public_card).p;
  for (int r = 0; r < 3; ++r) EXPECT_NEAR(report.posterior[r], prior[r], 1e-12);
}

TEST(EnvironmentalBeliefTest, SingleRaiseWorkedExample) {
  const auto obs = Obs("HJ", std::nullopt);
  const std::vector<ObservedAction> acts = {{Action::kRaise, Round::kPreReveal}};
  const auto report = EnvironmentalBelief(obs, acts, RaiseTable(0.1, 0.3, 0.9));
  EXPECT_NEAR(report.posterior[0], 0.04, 1e-12);
  EXPECT_NEAR(report.posterior[1], 0.24, 1e-12);
  EXPECT_NEAR(report.posterior[2], 0.72, 1e-12);
  ASSERT_EQ(report.evidence.size(), 1u);
  EXPECT_FALSE(report.evidence[0].floored);
}

TEST(EnvironmentalBeliefTest, MatchesBruteForceBayes) {
  Rng rng(31);
  for (int i = 0; i < 200; ++i) {
    const auto spot = testing::RandomDecisionSpot(rng);
    const PolicyTable pattern = testing::RandomTable(rng, 0.25);
    const int opp = 1 - spot.context.seat;
    const auto acts = ActionsOf(spot.context.history, opp);
    std::vector<oracle::Evidence> seen;
    for (const auto& a : acts) seen.push_back({a.action, a.round});
    const auto expected = oracle::BruteForcePosterior(
        spot.context.observation.hand, spot.context.observation.public_card,
        seen, pattern);
    const auto report =
        EnvironmentalBelief(spot.context.observation, acts, pattern);
    for (int r = 0; r < 3; ++r) {
      EXPECT_NEAR(report.posterior[r], expected[r], 1e-9);
    }
  }
}

TEST(EnvironmentalBeliefTest, MonotoneInLikelihood) {
  const auto obs = Obs("SQ", std::nullopt);
  const std::vector<ObservedAction> acts = {{Action::kRaise, Round::kPreReveal}};
  double last = 0.0;
  for (double k : {0.2, 0.4, 0.6, 0.8}) {
    const double p =
        EnvironmentalBelief(obs, acts, RaiseTable(0.3, 0.3, k)).posterior[2];
    EXPECT_GT(p, last);
    last = p;
  }
}

TEST(EnvironmentalBeliefTest, ImpossibleRankIsZero) {
  const auto obs = Obs("SK", "HK");
  const std::vector<ObservedAction> acts = {{Action::kRaise, Round::kPreReveal}};
  const auto report = EnvironmentalBelief(obs, acts, RaiseTable(0.1, 0.1, 0.99));
  EXPECT_EQ(report.posterior[2], 0.0);
}

TEST(EnvironmentalBeliefTest, FloorKeepsPosteriorAlive) {
  const auto obs = Obs("SQ", std::nullopt);
  const std::vector<ObservedAction> acts = {{Action::kRaise, Round::kPreReveal}};
  const auto report = EnvironmentalBelief(obs, acts, RaiseTable(0.0, 0.0, 0.0));
  EXPECT_TRUE(report.evidence[0].floored);
  EXPECT_NEAR(report.posterior[0] + report.posterior[1] + report.posterior[2],
              1.0, 1e-12);
  for (double f : report.evidence[0].factors) EXPECT_GT(f, 0.0);
}

TEST(SelfBeliefTest, PairedKingAlwaysWins) {
  const auto obs = Obs("SK", "HK");
  const auto env = EnvironmentalBelief(obs, {}, PolicyTable());
  const auto self = MakeSelfBelief(obs, {}, PolicyTable(), env);
  EXPECT_DOUBLE_EQ(self.win_now, 1.0);
  EXPECT_NE(self.advantages.find("King of Spades"), std::string::npos);
}

TEST(SelfBeliefTest, PreRevealRankComparison) {
  const auto obs = Obs("SQ", std::nullopt);
  BeliefReport env;
  env.posterior = {0.2, 0.4, 0.4};
  const auto self = MakeSelfBelief(obs, {}, PolicyTable(), env);
  EXPECT_NEAR(self.win_now, 0.2, 1e-12);
  EXPECT_NEAR(self.draw_now, 0.4, 1e-12);
  EXPECT_NEAR(self.lose_now, 0.4, 1e-12);
}

TEST(SelfBeliefTest, PartitionAndSecondOrderView) {
  Rng rng(32);
  for (int i = 0; i < 100; ++i) {
    const auto spot = testing::RandomDecisionSpot(rng);
    const PolicyTable env_pattern = testing::RandomTable(rng);
    const PolicyTable self_pattern = testing::RandomTable(rng);
    const auto& obs = spot.context.observation;
    const auto env = EnvironmentalBelief(
        obs, ActionsOf(spot.context.history, 1 - spot.context.seat),
        env_pattern);
    const auto self = MakeSelfBelief(
        obs, ActionsOf(spot.context.history, spot.context.seat), self_pattern,
        env);
    EXPECT_NEAR(self.win_now + self.draw_now + self.lose_now, 1.0, 1e-9);
    const auto& v = self.opponent_view;
    EXPECT_NEAR(v[0] + v[1] + v[2], 1.0, 1e-9);
  }
}

TEST(BeliefJsonTest, RoundTrip) {
  const auto obs = Obs("HJ", std::nullopt);
  const std::vector<ObservedAction> acts = {{Action::kRaise, Round::kPreReveal}};
  const auto report = EnvironmentalBelief(obs, acts, RaiseTable(0.1, 0.3, 0.9));
  const nlohmann::json j = report;
  const auto back = j.get<BeliefReport>();
  EXPECT_EQ(back.posterior, report.posterior);
  EXPECT_EQ(nlohmann::json(back), j);
}

}  // namespace
}  // namespace policyevol
