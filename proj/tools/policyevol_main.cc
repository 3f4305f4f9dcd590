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

// Command-line front end: run, ablate, stats and cfr-train.

#include <fmt/format.h>

#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "policyevol/harness.h"

namespace {

using namespace policyevol;

struct Common {
  std::string backend = "scripted";
  std::string endpoint;
  std::string model;
  bool json_mode = false;
  std::vector<std::string> ablate;
  int evolve_every = 1;
  int history_window = 0;
  long cfr_iters = 100000;
  std::string cfr_policy_path;
  std::string rules = "after_closer";
  int games = 100;
  std::uint64_t seed = 0;
  bool fixed_blinds = false;
};

void AddCommon(CLI::App* cmd, Common& c) {
  cmd->add_option("--backend", c.backend, "scripted or llm")
      ->check(CLI::IsMember({"scripted", "llm"}));
  cmd->add_option("--endpoint", c.endpoint, "chat completions URL");
  cmd->add_option("--model", c.model, "model name for the llm backend");
  cmd->add_flag("--json-mode", c.json_mode, "request JSON-object replies");
  cmd->add_option("--ablate", c.ablate,
                  "disable a stage: policy, belief, plan or reflection")
      ->check(CLI::IsMember({"policy", "belief", "plan", "reflection"}));
  cmd->add_option("--evolve-every", c.evolve_every, "games per evolution")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--history-window", c.history_window,
                  "trailing games used by evolution (0 = all)")
      ->check(CLI::NonNegativeNumber);
  cmd->add_option("--cfr-iters", c.cfr_iters, "CFR training iterations")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--cfr-policy-path", c.cfr_policy_path,
                  "CFR policy cache (read if present, else written)");
  cmd->add_option("--rules", c.rules,
                  "post-reveal opener: small_blind, big_blind, after_closer");
  cmd->add_option("--games", c.games, "games per match")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--seed", c.seed, "master seed");
  cmd->add_flag("--fixed-blinds", c.fixed_blinds,
                "seat 0 is always the small blind");
}

AgentFactory MakeFactory(const Common& c) {
  AgentFactory f;
  f.backend = c.backend;
  if (!c.endpoint.empty()) f.llm.endpoint = c.endpoint;
  if (!c.model.empty()) f.llm.model = c.model;
  f.llm.json_mode = c.json_mode;
  f.cfr_iterations = c.cfr_iters;
  if (!c.cfr_policy_path.empty()) f.cfr_policy_path = c.cfr_policy_path;
  Ablations a;
  for (const auto& stage : c.ablate) {
    const Ablations one = Ablations::Parse(stage);
    a.policy |= one.policy;
    a.belief |= one.belief;
    a.plan |= one.plan;
    a.reflection |= one.reflection;
  }
  f.policyevol_defaults.ablate = a;
  f.policyevol_defaults.evolve_every = c.evolve_every;
  if (c.history_window > 0) {
    f.policyevol_defaults.history_window = c.history_window;
  }
  return f;
}

MatchConfig MakeConfig(const Common& c) {
  MatchConfig m;
  m.n_games = c.games;
  m.seed = c.seed;
  m.blinds = c.fixed_blinds ? BlindRule::kFixed : BlindRule::kAlternate;
  m.rules.round2_first_actor = ParseRound2FirstActor(c.rules);
  return m;
}

nlohmann::json ReadJson(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  return nlohmann::json::parse(in);
}

int Run(const Common& c, const std::string& a, const std::string& b,
        const std::string& out, const std::string& policy_in,
        const std::string& policy_out) {
  AgentFactory factory = MakeFactory(c);
  MatchConfig config = MakeConfig(c);
  config.agents = {AgentSpec::Parse(a), AgentSpec::Parse(b)};
  std::array<std::unique_ptr<Agent>, kNumPlayers> agents;
  for (int s = 0; s < kNumPlayers; ++s) {
    agents[s] = MakeAgent(config.agents[s], factory, config.rules);
  }
  auto* evol = dynamic_cast<PolicyEvolAgent*>(agents[0].get());
  if ((!policy_in.empty() || !policy_out.empty()) && evol == nullptr) {
    throw std::invalid_argument("--policy-in/--policy-out need a policyevol --a");
  }
  if (!policy_in.empty()) {
    const nlohmann::json j = ReadJson(policy_in);
    evol->SetPatterns(j.at("env").get<PatternReport>(),
                      j.at("self").get<PatternReport>());
  }
  std::ofstream log;
  if (!out.empty()) {
    log.open(out, std::ios::binary | std::ios::trunc);
    if (!log) throw std::runtime_error("cannot write " + out);
  }
  MatchResult result;
  try {
    result = RunMatch(config, {agents[0].get(), agents[1].get()},
                      out.empty() ? nullptr : &log);
  } catch (const MatchAborted& e) {
    std::cerr << "match aborted: " << e.what() << '\n';
    return 2;
  }
  if (!policy_out.empty()) {
    std::ofstream po(policy_out);
    po << nlohmann::json{{"env", evol->env_pattern()},
                         {"self", evol->self_pattern()}}
              .dump(1)
       << '\n';
  }
  std::cout << fmt::format("{} {:+d}\n{} {:+d}\n", result.names[0],
                           result.totals[0], result.names[1], result.totals[1]);
  return 0;
}

int Ablate(const Common& c, const std::string& agent,
           const std::vector<std::string>& opponents, bool carry_memory,
           const std::string& out_dir, const std::string& csv) {
  AgentFactory factory = MakeFactory(c);
  std::vector<AgentSpec> specs;
  for (const auto& o : opponents) specs.push_back(AgentSpec::Parse(o));
  std::optional<std::filesystem::path> dir;
  if (!out_dir.empty()) {
    dir = out_dir;
    std::filesystem::create_directories(*dir);
  }
  const AblationReport report =
      AblationSuite(MakeConfig(c), AgentSpec::Parse(agent), specs, factory,
                    carry_memory, dir);
  std::cout << report.ToText();
  if (!csv.empty()) std::ofstream(csv) << report.ToCsv();
  return report.errors.empty() ? 0 : 1;
}

int Stats(const std::string& in, bool windows, bool positions, int seat,
          int window) {
  const MatchResult r = LoadMatchLog(in);
  if (!windows && !positions) windows = positions = true;
  std::cout << fmt::format("seat {} ({}) total {:+d} over {} games\n", seat,
                           r.names[seat], r.totals[seat], r.games.size());
  if (windows) {
    std::cout << "window\tbegin\tend\ttotal\tmean\tmedian\n";
    int i = 0;
    for (const Window& w : WindowStats(r, seat, window)) {
      std::cout << fmt::format("{}\t{}\t{}\t{}\t{:.6f}\t{:.6f}\n", i++, w.begin,
                               w.end, w.total, w.mean, w.median);
    }
  }
  if (positions) {
    const auto p = PositionStats(r, seat);
    std::cout << "position\traise\tcall\tcheck\tfold\n";
    for (int pos = 0; pos < 2; ++pos) {
      std::cout << (pos == 0 ? "small_blind" : "big_blind");
      for (Action a : kAllActions) {
        std::cout << fmt::format("\t{:.6f}", p[pos][ActionIndex(a)]);
      }
      std::cout << '\n';
    }
  }
  return 0;
}

int CfrTrainCommand(long iters, std::uint64_t seed, const std::string& rules,
                    const std::string& out, std::vector<long> checkpoints) {
  Rules r;
  r.round2_first_actor = ParseRound2FirstActor(rules);
  CfrSolver solver(r, seed);
  checkpoints.push_back(iters);
  std::sort(checkpoints.begin(), checkpoints.end());
  for (long target : checkpoints) {
    if (target > iters || target <= solver.iterations()) continue;
    solver.Iterate(target - solver.iterations());
    std::cout << fmt::format("iterations {} exploitability {:.6f}\n", target,
                             Exploitability(solver.AverageStrategy()));
  }
  if (!out.empty()) {
    std::ofstream(out) << nlohmann::json(solver.AverageStrategy()).dump(1)
                       << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Leduc Hold'em agents, matches and analyses"};
  app.set_config("--config", "", "key = value file ([run] sections allowed)");
  app.require_subcommand(1);

  Common run_common;
  std::string a = "policyevol", b = "random", out, policy_in, policy_out;
  CLI::App* run = app.add_subcommand("run", "play one seeded match");
  AddCommon(run, run_common);
  run->add_option("--a", a, "seat 0 agent spec, e.g. policyevol:tau=0.1");
  run->add_option("--b", b, "seat 1 agent spec, e.g. rule:J=kff");
  run->add_option("--out", out, "JSONL log path");
  run->add_option("--policy-in", policy_in, "warm-start patterns for --a");
  run->add_option("--policy-out", policy_out, "final patterns of --a");

  Common ablate_common;
  std::string agent = "policyevol", out_dir, csv;
  std::vector<std::string> opponents = {"random", "rule", "cfr"};
  bool carry_memory = false;
  CLI::App* ablate = app.add_subcommand("ablate", "full agent and ablations");
  AddCommon(ablate, ablate_common);
  ablate->add_option("--agent", agent, "policyevol spec");
  ablate->add_option("--opponents", opponents, "opponent specs");
  ablate->add_flag("--carry-memory", carry_memory,
                   "one agent per row across all opponents");
  ablate->add_option("--out-dir", out_dir, "directory for per-cell logs");
  ablate->add_option("--csv", csv, "CSV report path");

  std::string stats_in;
  bool windows = false, positions = false;
  int seat = 0, window = 10;
  CLI::App* stats = app.add_subcommand("stats", "window and position stats");
  stats->add_option("--in", stats_in, "JSONL log")->required();
  stats->add_flag("--windows", windows, "per-window chip gains");
  stats->add_flag("--positions", positions, "action proportions by blind");
  stats->add_option("--seat", seat, "seat to report")->check(CLI::Range(0, 1));
  stats->add_option("--window", window, "games per window")
      ->check(CLI::PositiveNumber);

  long iters = 100000;
  std::uint64_t cfr_seed = 0;
  std::string cfr_rules = "after_closer", cfr_out;
  std::vector<long> checkpoints;
  CLI::App* cfr = app.add_subcommand("cfr-train", "train the CFR baseline");
  cfr->add_option("--cfr-iters,--iters", iters, "iterations")
      ->check(CLI::PositiveNumber);
  cfr->add_option("--seed", cfr_seed, "recorded seed");
  cfr->add_option("--rules", cfr_rules, "post-reveal opener");
  cfr->add_option("--out,--cfr-policy-path", cfr_out, "policy JSON path");
  cfr->add_option("--checkpoints", checkpoints,
                  "also report exploitability at these iteration counts");

  CLI11_PARSE(app, argc, argv);
  try {
    if (*run) return Run(run_common, a, b, out, policy_in, policy_out);
    if (*ablate) {
      return Ablate(ablate_common, agent, opponents, carry_memory, out_dir, csv);
    }
    if (*stats) return Stats(stats_in, windows, positions, seat, window);
    if (*cfr) return CfrTrainCommand(iters, cfr_seed, cfr_rules, cfr_out, checkpoints);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
