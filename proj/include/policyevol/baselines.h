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

#ifndef POLICYEVOL_BASELINES_H_
#define POLICYEVOL_BASELINES_H_

#include <array>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "policyevol/agent.h"
#include "policyevol/leduc.h"

namespace policyevol {

inline constexpr std::string_view kCfrSchema = "policyevol.cfr/1";

// Positive parts normalized; all-nonpositive gives uniform.
std::vector<double> RegretMatching(std::span<const double> regrets);

// History letters: r(aise), c(all), k (check), f(old); rounds split by '/'.
char HistoryLetter(Action action);

// What the acting player can see. Serialized as "<own>|<board or ->|<hist>",
// e.g. "K|-|rc/" or "Q|J|rc/kr".
struct InfoSetKey {
  Rank own = Rank::kJack;
  std::optional<Rank> board;
  std::string history;

  std::string ToString() const;
  static InfoSetKey Parse(std::string_view text);
  friend bool operator==(const InfoSetKey&, const InfoSetKey&) = default;
};

InfoSetKey MakeInfoSetKey(Rank own, std::optional<Rank> board,
                          std::span<const HistoryStep> history);
InfoSetKey MakeInfoSetKey(const DecisionContext& context);

// Behaviour policy keyed by info set; each row lists the legal actions in
// engine order with their probabilities.
struct TabularPolicy {
  Rules rules;
  long iterations = 0;
  std::uint64_t seed = 0;
  std::map<std::string, std::vector<std::pair<Action, double>>> rows;

  // Throws std::out_of_range naming the key when uncovered.
  const std::vector<std::pair<Action, double>>& at(const std::string& key) const;
};

void to_json(nlohmann::json& j, const TabularPolicy& policy);
void from_json(const nlohmann::json& j, TabularPolicy& policy);

// Every info set of the game under `rules`, sorted.
std::vector<std::string> AllInfoSetKeys(const Rules& rules = {});
TabularPolicy UniformPolicy(const Rules& rules = {});

// Vanilla CFR over the rank-level public tree: full traversal per
// iteration, alternating updates (small blind, then big blind).
// Deterministic; the seed is recorded only.
class CfrSolver {
 public:
  explicit CfrSolver(const Rules& rules = {}, std::uint64_t seed = 0);
  ~CfrSolver();
  CfrSolver(CfrSolver&&) noexcept;
  CfrSolver& operator=(CfrSolver&&) noexcept;

  void Iterate(long n = 1);
  long iterations() const;
  TabularPolicy AverageStrategy() const;
  TabularPolicy CurrentStrategy() const;
  std::size_t num_info_sets() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

TabularPolicy CfrTrain(long iterations, std::uint64_t seed,
                       const Rules& rules = {});

// Best-response value (chips per hand) of the given position (0 = small
// blind, 1 = big blind) against the policy's other position.
double BestResponseValue(const TabularPolicy& policy, int position);
// (BR small blind + BR big blind) / 2 on the raw chip scale.
double Exploitability(const TabularPolicy& policy);
// Expected small-blind payoff when both positions follow the policy.
double SelfPlayValue(const TabularPolicy& policy);

class RandomAgent : public Agent {
 public:
  std::string name() const override { return "random"; }
  Action Decide(const DecisionContext& context, Rng& rng) override;
};

// What a rule agent faces at its turn.
enum class Situation : std::uint8_t {
  kOpen,         // contributions level; check is available
  kFacingBlind,  // small blind's first move
  kFacingRaise,
};
Situation SituationOf(const DecisionContext& context);

// Intended action per rank and situation; an illegal intention falls back
// raise -> call -> check and check -> call.
struct RuleTable {
  std::array<std::array<Action, 3>, kNumRanks> intent;

  // K raises, Q calls (checks when level), J checks, calls the blind and
  // folds to a raise.
  static RuleTable Default();
  static RuleTable Always(Action action);
  // "K=rrr,Q=ccc,J=kcf": letters per situation in enum order.
  static RuleTable Parse(std::string_view text);
  std::string ToString() const;
};

Action ResolveIntent(Action intent, std::span<const Action> legal);

class RuleAgent : public Agent {
 public:
  explicit RuleAgent(RuleTable table = RuleTable::Default())
      : table_(table) {}
  std::string name() const override { return "rule"; }
  Action Decide(const DecisionContext& context, Rng& rng) override;
  const RuleTable& table() const { return table_; }

 private:
  RuleTable table_;
};

class CfrAgent : public Agent {
 public:
  explicit CfrAgent(std::shared_ptr<const TabularPolicy> policy)
      : policy_(std::move(policy)) {}
  std::string name() const override { return "cfr"; }
  Action Decide(const DecisionContext& context, Rng& rng) override;

 private:
  std::shared_ptr<const TabularPolicy> policy_;
};

}  // namespace policyevol

#endif  // POLICYEVOL_BASELINES_H_
