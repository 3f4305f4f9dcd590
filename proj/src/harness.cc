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

#include "policyevol/harness.h"

#include <fmt/format.h>

#include <algorithm>
#include <fstream>
#include <ostream>

namespace policyevol {
namespace {

const char* PositionName(int position) {
  return position == 0 ? "small_blind" : "big_blind";
}

int ParseInt(const std::string& key, const std::string& value) {
  std::size_t used = 0;
  int out = 0;
  try {
    out = std::stoi(value, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != value.size() || value.empty()) {
    throw std::invalid_argument(fmt::format("{}: not an integer: '{}'", key, value));
  }
  return out;
}

double ParseDouble(const std::string& key, const std::string& value) {
  std::size_t used = 0;
  double out = 0.0;
  try {
    out = std::stod(value, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != value.size() || value.empty()) {
    throw std::invalid_argument(fmt::format("{}: not a number: '{}'", key, value));
  }
  return out;
}

std::unique_ptr<Agent> MakePolicyEvol(const AgentSpec& spec,
                                      AgentFactory& factory) {
  AgentConfig config = factory.policyevol_defaults;
  std::string backend = factory.backend;
  for (const auto& [key, value] : spec.options) {
    if (key == "name") {
      config.name = value;
    } else if (key == "opponent_name") {
      config.opponent_name = value;
    } else if (key == "ablate") {
      config.ablate = Ablations::Parse(value);
    } else if (key == "evolve_every") {
      config.evolve_every = ParseInt(key, value);
    } else if (key == "history_window") {
      const int n = ParseInt(key, value);
      if (n < 1) throw std::invalid_argument("history_window must be >= 1");
      config.history_window = static_cast<std::size_t>(n);
    } else if (key == "memory_in_prompt") {
      config.memory_in_prompt = ParseInt(key, value);
    } else if (key == "tau") {
      config.params.tau = ParseDouble(key, value);
    } else if (key == "lambda") {
      config.params.lambda = ParseDouble(key, value);
    } else if (key == "alpha") {
      config.params.alpha = ParseDouble(key, value);
    } else if (key == "style") {
      config.style = ParseCharacter(value);
    } else if (key == "act") {
      if (value != "greedy" && value != "sampled") {
        throw std::invalid_argument("act must be greedy or sampled");
      }
      config.act_mode.sampled = value == "sampled";
    } else if (key == "temperature") {
      config.act_mode.temperature = ParseDouble(key, value);
    } else if (key == "lookahead") {
      if (value == "maximize") {
        config.lookahead = Lookahead::kMaximize;
      } else if (value == "self") {
        config.lookahead = Lookahead::kSelfPolicy;
      } else {
        throw std::invalid_argument("lookahead must be maximize or self");
      }
    } else if (key == "backend") {
      backend = value;
    } else {
      throw std::invalid_argument("unknown policyevol option: " + key);
    }
  }
  std::shared_ptr<Reasoner> reasoner;
  if (backend == "scripted") {
    reasoner = std::make_shared<ScriptedReasoner>();
  } else if (backend == "llm") {
    factory.llm.Validate();
    reasoner = std::make_shared<LlmReasoner>(
        factory.llm, factory.transport ? factory.transport()
                                       : std::make_unique<HttpTransport>());
  } else {
    throw std::invalid_argument("unknown backend: " + backend);
  }
  return std::make_unique<PolicyEvolAgent>(std::move(config),
                                           std::move(reasoner));
}

std::unique_ptr<Agent> MakeRule(const AgentSpec& spec) {
  RuleTable table = RuleTable::Default();
  std::string items;
  for (const auto& [key, value] : spec.options) {
    if (key == "always") {
      table = RuleTable::Always(ParseAction(value));
    } else if (key == "K" || key == "Q" || key == "J") {
      items += (items.empty() ? "" : ",") + key + "=" + value;
    } else {
      throw std::invalid_argument("unknown rule option: " + key);
    }
  }
  if (!items.empty()) {
    // Rank rows override the base table.
    const RuleTable parsed = RuleTable::Parse(items);
    for (const auto& [key, value] : spec.options) {
      if (key != "always") {
        const int r = RankIndex(ParseRank(key));
        table.intent[r] = parsed.intent[r];
      }
    }
  }
  return std::make_unique<RuleAgent>(table);
}

void WriteLine(std::ostream* log, const nlohmann::json& j) {
  if (log != nullptr) *log << j.dump() << '\n';
}

}  // namespace

AgentSpec AgentSpec::Parse(std::string_view text) {
  AgentSpec spec;
  const auto colon = text.find(':');
  spec.type = std::string(text.substr(0, colon));
  if (spec.type.empty()) throw std::invalid_argument("empty agent type");
  if (colon == std::string_view::npos) return spec;
  std::string_view rest = text.substr(colon + 1);
  while (!rest.empty()) {
    const auto comma = rest.find(',');
    const std::string_view item = rest.substr(0, comma);
    const auto eq = item.find('=');
    if (eq == std::string_view::npos || eq == 0) {
      throw std::invalid_argument("malformed agent option: " + std::string(item));
    }
    spec.options[std::string(item.substr(0, eq))] =
        std::string(item.substr(eq + 1));
    if (comma == std::string_view::npos) break;
    rest = rest.substr(comma + 1);
  }
  return spec;
}

std::string AgentSpec::ToString() const {
  std::string out = type;
  char sep = ':';
  for (const auto& [key, value] : options) {
    out += fmt::format("{}{}={}", sep, key, value);
    sep = ',';
  }
  return out;
}

std::shared_ptr<const TabularPolicy> AgentFactory::CfrPolicy(
    const Rules& rules) {
  if (cfr_policy && cfr_policy->rules == rules) return cfr_policy;
  if (cfr_policy_path && std::filesystem::exists(*cfr_policy_path)) {
    std::ifstream in(*cfr_policy_path);
    auto loaded = std::make_shared<TabularPolicy>(
        nlohmann::json::parse(in).get<TabularPolicy>());
    if (loaded->rules != rules) {
      throw std::invalid_argument(
          "CFR policy file was trained under different rules: " +
          cfr_policy_path->string());
    }
    cfr_policy = std::move(loaded);
    return cfr_policy;
  }
  cfr_policy = std::make_shared<TabularPolicy>(
      CfrTrain(cfr_iterations, /*seed=*/0, rules));
  if (cfr_policy_path) {
    std::ofstream out(*cfr_policy_path);
    out << nlohmann::json(*cfr_policy).dump(1) << '\n';
  }
  return cfr_policy;
}

std::unique_ptr<Agent> MakeAgent(const AgentSpec& spec, AgentFactory& factory,
                                 const Rules& rules) {
  if (spec.type == "policyevol") return MakePolicyEvol(spec, factory);
  if (spec.type == "rule") return MakeRule(spec);
  if (!spec.options.empty()) {
    throw std::invalid_argument(spec.type + " agents take no options");
  }
  if (spec.type == "random") return std::make_unique<RandomAgent>();
  if (spec.type == "cfr") {
    return std::make_unique<CfrAgent>(factory.CfrPolicy(rules));
  }
  throw std::invalid_argument("unknown agent type: " + spec.type);
}

void MatchConfig::Validate() const {
  if (n_games < 1) throw std::invalid_argument("n_games must be >= 1");
  for (const AgentSpec& spec : agents) {
    if (spec.type.empty()) throw std::invalid_argument("missing agent spec");
  }
}

MatchResult RunMatch(const MatchConfig& config,
                     std::array<Agent*, kNumPlayers> agents,
                     std::ostream* log, const GameHook& after_game) {
  config.Validate();
  MatchResult result;
  for (int s = 0; s < kNumPlayers; ++s) result.names[s] = agents[s]->name();
  WriteLine(log, {{"type", "header"},
                  {"schema", kMatchSchema},
                  {"seed", config.seed},
                  {"n_games", config.n_games},
                  {"blinds", config.blinds == BlindRule::kAlternate
                                 ? "alternate"
                                 : "fixed"},
                  {"rules", config.rules},
                  {"starting_stack", config.starting_stack},
                  {"agents",
                   {{{"seat", 0},
                     {"name", result.names[0]},
                     {"spec", config.agents[0].ToString()}},
                    {{"seat", 1},
                     {"name", result.names[1]},
                     {"spec", config.agents[1].ToString()}}}},
                  {"reproducible",
                   agents[0]->reproducible() && agents[1]->reproducible()}});

  for (int g = 0; g < config.n_games; ++g) {
    const std::uint64_t game_seed = DeriveSeed(config.seed, g);
    const int sb = config.blinds == BlindRule::kAlternate ? g % 2 : 0;
    std::array<Rng, kNumPlayers> rngs = {
        Rng(DeriveSeed(game_seed, 1)), Rng(DeriveSeed(game_seed, 2))};
    GameState state = NewGame(game_seed, sb, config.rules);
    std::vector<RecordStep> steps;
    try {
      while (!state.terminal()) {
        const DecisionContext context = MakeContext(state);
        const int seat = context.seat;
        const Action action = agents[seat]->Decide(context, rngs[seat]);
        if (!IsLegal(state, action)) {
          throw GameError(fmt::format("{} chose illegal action '{}'",
                                      result.names[seat], ToString(action)));
        }
        const int position = seat == sb ? 0 : 1;
        ++result.action_counts[seat][position][ActionIndex(action)];
        nlohmann::json line = {{"type", "step"},
                               {"game", g},
                               {"step", steps.size()},
                               {"seat", seat},
                               {"position", PositionName(position)},
                               {"round", ToString(state.round())},
                               {"observation", context.observation},
                               {"action", action}};
        nlohmann::json trace = agents[seat]->LastDecisionTrace();
        if (!trace.is_null()) line["trace"] = std::move(trace);
        WriteLine(log, line);
        steps.push_back({seat, state.round(), context.observation, action,
                         std::nullopt});
        state = ApplyAction(state, action);
      }
      const Outcome& outcome = *state.outcome();
      for (int s = 0; s < kNumPlayers; ++s) {
        agents[s]->EndGame(MakeRecord(state, g, s, steps));
        result.totals[s] += outcome.net[s];
      }
      result.games.push_back({g, game_seed, sb, outcome});
      nlohmann::json line = {
          {"type", "game"},
          {"game", g},
          {"seed", game_seed},
          {"small_blind", sb},
          {"cards",
           {state.private_card(0).ToString(), state.private_card(1).ToString()}},
          {"public_card", nullptr},
          {"outcome", outcome},
          {"net", outcome.net},
          {"totals", result.totals}};
      if (state.public_card()) {
        line["public_card"] = state.public_card()->ToString();
      }
      nlohmann::json traces = nlohmann::json::array();
      bool any = false;
      for (Agent* a : agents) {
        traces.push_back(a->LastGameTrace());
        any = any || !traces.back().is_null();
      }
      if (any) line["evolution"] = std::move(traces);
      WriteLine(log, line);
      if (after_game) after_game(result);
    } catch (const std::exception& e) {
      result.error = fmt::format("game {}: {}", g, e.what());
      WriteLine(log, {{"type", "abort"}, {"game", g}, {"error", *result.error}});
      if (log != nullptr) log->flush();
      const std::string message = *result.error;
      throw MatchAborted(message, std::move(result));
    }
  }
  if (log != nullptr) log->flush();
  return result;
}

MatchResult RunMatch(const MatchConfig& config, AgentFactory& factory) {
  config.Validate();
  std::array<std::unique_ptr<Agent>, kNumPlayers> owned;
  for (int s = 0; s < kNumPlayers; ++s) {
    owned[s] = MakeAgent(config.agents[s], factory, config.rules);
  }
  std::ofstream file;
  if (config.log_path) {
    file.open(*config.log_path, std::ios::binary | std::ios::trunc);
    if (!file) {
      throw std::runtime_error("cannot write " + config.log_path->string());
    }
  }
  return RunMatch(config, {owned[0].get(), owned[1].get()},
                  config.log_path ? &file : nullptr);
}

MatchResult LoadMatchLog(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  MatchResult result;
  std::string text;
  int line_no = 0;
  bool header = false;
  while (std::getline(in, text)) {
    ++line_no;
    if (text.empty()) continue;
    try {
      const nlohmann::json j = nlohmann::json::parse(text);
      const std::string type = j.at("type");
      if (!header) {
        if (type != "header" || j.at("schema") != kMatchSchema) {
          throw std::runtime_error("expected a policyevol.match/1 header");
        }
        for (const auto& a : j.at("agents")) {
          result.names.at(a.at("seat").get<int>()) = a.at("name");
        }
        header = true;
      } else if (type == "step") {
        const int seat = j.at("seat");
        const int position = j.at("position") == "small_blind" ? 0 : 1;
        ++result.action_counts.at(seat)[position]
              [ActionIndex(j.at("action").get<Action>())];
      } else if (type == "game") {
        GameSummary game;
        game.index = j.at("game");
        game.seed = j.at("seed");
        game.small_blind = j.at("small_blind");
        game.outcome = j.at("outcome").get<Outcome>();
        for (int s = 0; s < kNumPlayers; ++s) {
          result.totals[s] += game.outcome.net[s];
        }
        result.games.push_back(game);
      } else if (type == "abort") {
        result.error = j.at("error");
      } else {
        throw std::runtime_error("unknown line type '" + type + "'");
      }
    } catch (const std::exception& e) {
      throw std::runtime_error(
          fmt::format("{}:{}: {}", path.string(), line_no, e.what()));
    }
  }
  if (!header) throw std::runtime_error(path.string() + ": empty log");
  return result;
}

std::vector<Window> WindowStats(const MatchResult& result, int seat,
                                int size) {
  if (size < 1) throw std::invalid_argument("window size must be >= 1");
  const int n = static_cast<int>(result.games.size());
  if (n < size) {
    throw std::invalid_argument(
        fmt::format("{} games do not fill a window of {}", n, size));
  }
  std::vector<Window> windows;
  for (int begin = 0; begin + size <= n; begin += size) {
    Window w;
    w.begin = begin;
    w.end = begin + size;
    std::vector<int> gains;
    for (int g = begin; g < w.end; ++g) {
      gains.push_back(result.games[g].outcome.net[seat]);
      w.total += gains.back();
    }
    w.mean = static_cast<double>(w.total) / size;
    std::sort(gains.begin(), gains.end());
    w.median = size % 2 == 1
                   ? gains[size / 2]
                   : (gains[size / 2 - 1] + gains[size / 2]) / 2.0;
    windows.push_back(w);
  }
  return windows;
}

std::array<std::array<double, kNumActions>, 2> PositionStats(
    const MatchResult& result, int seat) {
  std::array<std::array<double, kNumActions>, 2> out{};
  for (int pos = 0; pos < 2; ++pos) {
    const auto& counts = result.action_counts[seat][pos];
    long total = 0;
    for (long c : counts) total += c;
    if (total == 0) continue;
    for (int a = 0; a < kNumActions; ++a) {
      out[pos][a] = static_cast<double>(counts[a]) / total;
    }
  }
  return out;
}

std::string AblationReport::ToText() const {
  std::size_t width = 16;
  for (const auto& r : rows) width = std::max(width, r.size() + 2);
  std::string out = fmt::format("{:<{}}", "", width);
  for (const auto& c : columns) out += fmt::format("{:>24}", c);
  out += '\n';
  for (std::size_t r = 0; r < rows.size(); ++r) {
    out += fmt::format("{:<{}}", rows[r], width);
    for (const auto& cell : totals[r]) {
      out += cell ? fmt::format("{:>24}", *cell) : fmt::format("{:>24}", "failed");
    }
    out += '\n';
  }
  for (const auto& e : errors) out += "error: " + e + '\n';
  return out;
}

std::string AblationReport::ToCsv() const {
  std::string out = "variant";
  for (const auto& c : columns) out += ",\"" + c + "\"";
  out += '\n';
  for (std::size_t r = 0; r < rows.size(); ++r) {
    out += rows[r];
    for (const auto& cell : totals[r]) {
      out += ',' + (cell ? std::to_string(*cell) : std::string());
    }
    out += '\n';
  }
  return out;
}

void to_json(nlohmann::json& j, const AblationReport& report) {
  nlohmann::json cells = nlohmann::json::array();
  for (const auto& row : report.totals) {
    nlohmann::json r = nlohmann::json::array();
    for (const auto& cell : row) r.push_back(cell ? nlohmann::json(*cell) : nullptr);
    cells.push_back(r);
  }
  j = {{"rows", report.rows},
       {"columns", report.columns},
       {"totals", cells},
       {"errors", report.errors}};
}

AblationReport AblationSuite(
    const MatchConfig& base, const AgentSpec& policyevol,
    const std::vector<AgentSpec>& opponents, AgentFactory& factory,
    bool carry_memory, const std::optional<std::filesystem::path>& log_dir) {
  if (policyevol.type != "policyevol") {
    throw std::invalid_argument("ablation suite needs a policyevol agent");
  }
  static constexpr std::array<std::pair<const char*, const char*>, 5> kRows = {
      {{"full", ""},
       {"w/o policy", "policy"},
       {"w/o belief", "belief"},
       {"w/o plan", "plan"},
       {"w/o reflection", "reflection"}}};
  AblationReport report;
  for (const auto& spec : opponents) report.columns.push_back(spec.ToString());
  for (const auto& [row_name, stage] : kRows) {
    report.rows.push_back(row_name);
    auto& row = report.totals.emplace_back(opponents.size());
    AgentSpec spec = policyevol;
    if (*stage != '\0') {
      spec.options["ablate"] = stage;
    } else {
      spec.options.erase("ablate");
    }
    std::unique_ptr<Agent> carried;
    for (std::size_t c = 0; c < opponents.size(); ++c) {
      MatchConfig config = base;
      config.agents = {spec, opponents[c]};
      config.log_path.reset();
      try {
        std::unique_ptr<Agent> fresh;
        if (!carry_memory || !carried) {
          fresh = MakeAgent(spec, factory, config.rules);
        }
        Agent* agent = fresh ? fresh.get() : carried.get();
        std::unique_ptr<Agent> opponent =
            MakeAgent(opponents[c], factory, config.rules);
        std::ofstream file;
        if (log_dir) {
          std::string slug = *stage == '\0' ? "full" : fmt::format("no_{}", stage);
          file.open(*log_dir / fmt::format("{}__{}.jsonl", slug, c),
                    std::ios::binary | std::ios::trunc);
        }
        const MatchResult result =
            RunMatch(config, {agent, opponent.get()}, log_dir ? &file : nullptr);
        row[c] = result.totals[0];
        if (carry_memory && fresh) carried = std::move(fresh);
      } catch (const std::exception& e) {
        report.errors.push_back(
            fmt::format("{} vs {}: {}", row_name, report.columns[c], e.what()));
      }
    }
  }
  return report;
}

}  // namespace policyevol
