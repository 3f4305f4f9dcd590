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

#ifndef POLICYEVOL_TESTS_SUPPORT_RANDOM_INSTANCES_H_
#define POLICYEVOL_TESTS_SUPPORT_RANDOM_INSTANCES_H_

#include <array>
#include <vector>

#include "policyevol/leduc.h"
#include "policyevol/plan.h"
#include "policyevol/policy.h"
#include "policyevol/rng.h"

namespace policyevol::testing {

// Random full-support table; each entry is zeroed with `zero_prob` (at least
// one entry per row survives).
inline PolicyTable RandomTable(Rng& rng, double zero_prob = 0.15) {
  PolicyTable table;
  for (Rank rank : kAllRanks) {
    for (int rd = 0; rd < kNumRounds; ++rd) {
      ActionDistribution row{};
      double total = 0.0;
      while (total == 0.0) {
        for (double& p : row) {
          p = UniformUnit(rng) < zero_prob ? 0.0 : UniformUnit(rng);
          total += p;
        }
      }
      for (double& p : row) p /= total;
      table.SetRow(rank, static_cast<Round>(rd), row);
    }
  }
  return table;
}

inline std::array<double, 3> RandomDistribution(Rng& rng) {
  std::array<double, 3> d{};
  double total = 0.0;
  for (double& p : d) {
    p = 0.05 + UniformUnit(rng);
    total += p;
  }
  for (double& p : d) p /= total;
  return d;
}

// A live decision point reached by random legal play from a random deal.
struct RandomSpot {
  GameState state;
  DecisionContext context;
};

inline RandomSpot RandomDecisionSpot(Rng& rng) {
  for (;;) {
    const Rules rules{UniformBelow(rng, 2) == 0
                          ? Round2FirstActor::kSmallBlind
                          : Round2FirstActor::kAfterCloser};
    GameState s = NewGame(rng(), static_cast<int>(UniformBelow(rng, 2)), rules);
    const int depth = static_cast<int>(UniformBelow(rng, 6));
    for (int i = 0; i < depth && !s.terminal(); ++i) {
      const auto legal = LegalActions(s);
      // Folding ends the game too early to be interesting.
      std::vector<Action> options;
      for (Action a : legal) {
        if (a != Action::kFold) options.push_back(a);
      }
      s = ApplyAction(s, options[UniformBelow(rng, options.size())]);
    }
    if (s.terminal()) continue;
    DecisionContext context;
    context.seat = s.to_act();
    context.observation = Observe(s, context.seat);
    context.small_blind = s.small_blind();
    context.rules = rules;
    context.history = s.history();
    return {s, context};
  }
}

}  // namespace policyevol::testing

#endif  // POLICYEVOL_TESTS_SUPPORT_RANDOM_INSTANCES_H_
