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

#ifndef POLICYEVOL_HARNESS_H_
#define POLICYEVOL_HARNESS_H_

#include <array>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "policyevol/agent.h"
#include "policyevol/baselines.h"
#include "policyevol/llm_backend.h"

namespace policyevol {

inline constexpr std::string_view kMatchSchema = "policyevol.match/1";

// "type" or "type:key=value,key=value". Types: policyevol, random, rule,
// cfr. See MakeAgent for the keys each type reads.
struct AgentSpec {
  std::string type;
  std::map<std::string, std::string> options;

  static AgentSpec Parse(std::string_view text);
  std::string ToString() const;
  friend bool operator==(const AgentSpec&, const AgentSpec&) = default;
};

// Shared resources for building agents.
struct AgentFactory {
  // Reasoner backend for policyevol agents: "scripted" or "llm".
  std::string backend = "scripted";
  BackendConfig llm;
  // Builds the transport for the llm backend; HttpTransport when unset.
  std::function<std::unique_ptr<Transport>()> transport;
  // CFR policy: loaded from `cfr_policy_path` when it exists, else trained
  // for `cfr_iterations` and written there (when a path is given).
  long cfr_iterations = 100000;
  std::optional<std::filesystem::path> cfr_policy_path;
  std::shared_ptr<const TabularPolicy> cfr_policy;
  // Defaults applied to every policyevol agent before its spec options.
  AgentConfig policyevol_defaults;

  std::shared_ptr<const TabularPolicy> CfrPolicy(const Rules& rules);
};

// policyevol keys: name, ablate, evolve_every, history_window, tau, lambda,
// alpha, style, act (greedy|sampled), temperature, lookahead
// (maximize|self), backend. rule keys: K, Q, J (three letters each, see
// RuleTable::Parse) or always=<action>. Throws std::invalid_argument.
std::unique_ptr<Agent> MakeAgent(const AgentSpec& spec, AgentFactory& factory,
                                 const Rules& rules);

enum class BlindRule : std::uint8_t { kAlternate, kFixed };

struct MatchConfig {
  std::array<AgentSpec, kNumPlayers> agents = {AgentSpec{"policyevol", {}},
                                               AgentSpec{"random", {}}};
  int n_games = 100;
  std::uint64_t seed = 0;
  BlindRule blinds = BlindRule::kAlternate;
  Rules rules{Round2FirstActor::kAfterCloser};
  // Reported only; the harness tracks net chips and never bankrupts.
  int starting_stack = 100;
  std::optional<std::filesystem::path> log_path;

  void Validate() const;
};

struct GameSummary {
  int index = 0;
  std::uint64_t seed = 0;
  int small_blind = 0;
  Outcome outcome;
};

// Totals are on the raw chip scale, by seat.
struct MatchResult {
  std::array<std::string, kNumPlayers> names;
  std::vector<GameSummary> games;
  std::array<long, kNumPlayers> totals = {0, 0};
  // [seat][position: 0 small blind, 1 big blind][action index]
  std::array<std::array<std::array<long, kNumActions>, 2>, kNumPlayers>
      action_counts{};
  // Set when the match stopped early.
  std::optional<std::string> error;
};

class MatchAborted : public std::runtime_error {
 public:
  MatchAborted(const std::string& what, MatchResult partial)
      : std::runtime_error(what), partial_(std::move(partial)) {}
  const MatchResult& partial() const { return partial_; }

 private:
  MatchResult partial_;
};

using GameHook = std::function<void(const MatchResult&)>;

// Plays the match with the given agents (seat 0 = agents[0]); writes JSONL
// to `log` when not null and calls `after_game` after every game. Agent
// exceptions abort with MatchAborted after the log is flushed.
MatchResult RunMatch(const MatchConfig& config,
                     std::array<Agent*, kNumPlayers> agents,
                     std::ostream* log, const GameHook& after_game = nullptr);
// Builds both agents from their specs and opens config.log_path.
MatchResult RunMatch(const MatchConfig& config, AgentFactory& factory);

// Re-reads a JSONL match log; throws std::runtime_error naming the line.
MatchResult LoadMatchLog(const std::filesystem::path& path);

struct Window {
  int begin = 0;  // game index, inclusive
  int end = 0;    // exclusive
  long total = 0;
  double mean = 0.0;
  double median = 0.0;
};

// Non-overlapping windows of per-game chip gains for `seat`; a trailing
// partial window is dropped. Throws when fewer than `size` games.
std::vector<Window> WindowStats(const MatchResult& result, int seat,
                                int size = 10);

// Action proportions [position][action] for `seat`; a position without
// decisions gives a zero row.
std::array<std::array<double, kNumActions>, 2> PositionStats(
    const MatchResult& result, int seat);

struct AblationReport {
  std::vector<std::string> rows;     // full, w/o policy, ...
  std::vector<std::string> columns;  // opponent specs
  // Total chips of the policyevol seat; absent when the cell failed.
  std::vector<std::vector<std::optional<long>>> totals;
  std::vector<std::string> errors;

  std::string ToText() const;
  std::string ToCsv() const;
};

// Base agent plus the four single-stage ablations against each opponent.
// `base` supplies everything but the agents; seat 0 holds the policyevol
// agent. With `carry_memory` one agent per row plays the opponents in
// order; otherwise each cell starts fresh. Logs go to
// <log_dir>/<row>__<column index>.jsonl when log_dir is set.
AblationReport AblationSuite(const MatchConfig& base,
                             const AgentSpec& policyevol,
                             const std::vector<AgentSpec>& opponents,
                             AgentFactory& factory, bool carry_memory = false,
                             const std::optional<std::filesystem::path>&
                                 log_dir = std::nullopt);

void to_json(nlohmann::json& j, const AblationReport& report);

}  // namespace policyevol

#endif  // POLICYEVOL_HARNESS_H_
