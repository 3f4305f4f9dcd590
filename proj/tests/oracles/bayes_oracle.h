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

// Brute-force posterior over the opponent's rank: enumerate every complete
// deal consistent with what we see, weight each by the product of the
// opponent's action likelihoods, and sum per rank.

#ifndef POLICYEVOL_TESTS_ORACLES_BAYES_ORACLE_H_
#define POLICYEVOL_TESTS_ORACLES_BAYES_ORACLE_H_

#include <algorithm>
#include <array>
#include <optional>
#include <vector>

#include "policyevol/leduc.h"
#include "policyevol/policy.h"

namespace policyevol::oracle {

struct Evidence {
  Action action;
  Round round;
};

inline std::array<double, 3> BruteForcePosterior(
    Card mine, std::optional<Card> board, const std::vector<Evidence>& seen,
    const PolicyTable& pattern, double floor = 1e-3) {
  std::array<double, 3> mass{};
  for (int opp = 0; opp < 6; ++opp) {
    for (int pub = 0; pub < 6; ++pub) {
      if (opp == pub || opp == mine.index() || pub == mine.index()) continue;
      if (board && pub != board->index()) continue;
      double w = 1.0;
      const Card theirs = Card::FromIndex(opp);
      for (const Evidence& e : seen) {
        w *= std::max(pattern.prob(theirs.rank, e.round, e.action), floor);
      }
      mass[static_cast<int>(theirs.rank)] += w;
    }
  }
  const double total = mass[0] + mass[1] + mass[2];
  for (double& m : mass) m /= total;
  return mass;
}

}  // namespace policyevol::oracle

#endif  // POLICYEVOL_TESTS_ORACLES_BAYES_ORACLE_H_
