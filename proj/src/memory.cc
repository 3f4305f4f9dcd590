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

#include "policyevol/memory.h"

#include <fstream>

namespace policyevol {

GameRecord MakeRecord(const GameState& final_state, int game_index,
                      int self_seat, std::vector<RecordStep> steps) {
  if (!final_state.terminal()) {
    throw GameError("cannot record an unfinished game");
  }
  GameRecord record;
  record.game_index = game_index;
  record.seed = final_state.seed();
  record.small_blind = final_state.small_blind();
  record.self_seat = self_seat;
  record.rules = final_state.rules();
  record.steps = std::move(steps);
  record.revealed_cards = final_state.deal().private_cards;
  record.public_card = final_state.round() == Round::kPostReveal
                           ? std::optional<Card>(final_state.deal().board)
                           : std::nullopt;
  record.outcome = *final_state.outcome();
  return record;
}

GameState ReplayRecord(const GameRecord& record) {
  const std::string where = "game " + std::to_string(record.game_index) + ": ";
  GameState state;
  try {
    state = NewGame(record.seed, record.small_blind, record.rules);
  } catch (const std::exception& e) {
    throw CorruptRecord(where + e.what());
  }
  if (state.deal().private_cards != record.revealed_cards) {
    throw CorruptRecord(where + "revealed cards differ from the seeded deal");
  }
  for (std::size_t i = 0; i < record.steps.size(); ++i) {
    const RecordStep& step = record.steps[i];
    const std::string at = where + "step " + std::to_string(i) + ": ";
    if (state.terminal()) throw CorruptRecord(at + "game already over");
    if (step.player != state.to_act()) {
      throw CorruptRecord(at + "acting seat out of turn");
    }
    if (step.round != state.round()) {
      throw CorruptRecord(at + "round label mismatch");
    }
    if (Observe(state, step.player) != step.observation) {
      throw CorruptRecord(at + "observation snapshot mismatch");
    }
    try {
      state = ApplyAction(state, step.action);
    } catch (const GameError& e) {
      throw CorruptRecord(at + e.what());
    }
  }
  if (!state.terminal()) throw CorruptRecord(where + "game not finished");
  if (*state.outcome() != record.outcome) {
    throw CorruptRecord(where + "outcome mismatch");
  }
  if (state.public_card() != record.public_card) {
    throw CorruptRecord(where + "public card mismatch");
  }
  return state;
}

int HistoryDigest::row_total(Role role, Rank rank, Round round) const {
  int total = 0;
  for (Action a : kAllActions) total += count(role, rank, round, a);
  return total;
}

int HistoryDigest::context_total(Role role, Round round) const {
  int total = 0;
  for (Rank r : kAllRanks) total += row_total(role, r, round);
  return total;
}

void HistoryDigest::AddRecord(const GameRecord& record) {
  for (const RecordStep& step : record.steps) {
    const Role role =
        step.player == record.self_seat ? Role::kSelf : Role::kOpponent;
    const Rank rank = record.revealed_cards[step.player].rank;
    ++counts_[static_cast<int>(role)][RankIndex(rank)][RoundIndex(step.round)]
             [ActionIndex(step.action)];
    ++decision_steps_;
  }
  const int before = chip_trajectory_.empty() ? 0 : chip_trajectory_.back();
  chip_trajectory_.push_back(before + record.outcome.net[record.self_seat]);
}

void HistoryDigest::AddCount(Role role, Rank rank, Round round, Action action,
                             int n) {
  if (n < 0) throw std::invalid_argument("negative count");
  counts_[static_cast<int>(role)][RankIndex(rank)][RoundIndex(round)]
         [ActionIndex(action)] += n;
  decision_steps_ += n;
}

HistoryDigest& HistoryDigest::operator+=(const HistoryDigest& other) {
  for (int role = 0; role < 2; ++role)
    for (int r = 0; r < kNumRanks; ++r)
      for (int rd = 0; rd < kNumRounds; ++rd)
        for (int a = 0; a < kNumActions; ++a)
          counts_[role][r][rd][a] += other.counts_[role][r][rd][a];
  decision_steps_ += other.decision_steps_;
  const int offset = chip_trajectory_.empty() ? 0 : chip_trajectory_.back();
  for (int chips : other.chip_trajectory_) {
    chip_trajectory_.push_back(offset + chips);
  }
  if (other.window_.size() > 0) {
    if (window_.size() == 0) {
      window_ = other.window_;
    } else {
      window_.begin = std::min(window_.begin, other.window_.begin);
      window_.end = std::max(window_.end, other.window_.end);
    }
  }
  return *this;
}

MemoryStore::MemoryStore(std::filesystem::path path) : path_(std::move(path)) {}

void MemoryStore::Append(GameRecord record) {
  ReplayRecord(record);
  if (path_) {
    std::ofstream out(*path_, std::ios::app);
    if (!out) {
      throw std::runtime_error("cannot open memory file " + path_->string());
    }
    out << nlohmann::json(record).dump() << '\n';
  }
  records_.push_back(std::move(record));
}

MemoryStore MemoryStore::Load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open memory file " + path.string());
  MemoryStore store;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    GameRecord record;
    try {
      record = nlohmann::json::parse(line).get<GameRecord>();
    } catch (const std::exception& e) {
      throw CorruptRecord(path.string() + ":" + std::to_string(line_no) +
                          ": " + e.what());
    }
    store.Append(std::move(record));
  }
  store.path_ = path;
  return store;
}

HistoryDigest Digest(std::span<const GameRecord> records, GameWindow window) {
  if (window.begin > window.end || window.end > records.size()) {
    throw std::out_of_range("digest window outside the store");
  }
  HistoryDigest digest(window);
  for (std::size_t i = window.begin; i < window.end; ++i) {
    digest.AddRecord(records[i]);
  }
  return digest;
}

HistoryDigest Digest(const MemoryStore& store, GameWindow window) {
  return Digest(store.records(), window);
}

GameWindow TrailingWindow(std::size_t store_size,
                          std::optional<std::size_t> history_window) {
  if (!history_window || *history_window >= store_size) {
    return GameWindow{0, store_size};
  }
  return GameWindow{store_size - *history_window, store_size};
}

void to_json(nlohmann::json& j, const RecordStep& step) {
  j = {{"player", step.player},
       {"round", std::string(ToString(step.round))},
       {"observation", step.observation},
       {"action", step.action}};
  if (step.say) j["say"] = *step.say;
}

void from_json(const nlohmann::json& j, RecordStep& step) {
  step.player = j.at("player").get<int>();
  step.round = j.at("round").get<std::string>() == "pre_reveal"
                   ? Round::kPreReveal
                   : Round::kPostReveal;
  step.observation = j.at("observation").get<RawObservation>();
  step.action = j.at("action").get<Action>();
  step.say = j.contains("say") ? std::optional<std::string>(
                                     j.at("say").get<std::string>())
                               : std::nullopt;
}

void to_json(nlohmann::json& j, const GameRecord& record) {
  j = nlohmann::json::object();
  j["schema"] = kRecordSchema;
  j["game_index"] = record.game_index;
  j["seed"] = record.seed;
  j["small_blind"] = record.small_blind;
  j["self_seat"] = record.self_seat;
  j["rules"] = record.rules;
  j["steps"] = record.steps;
  j["revealed_cards"] = record.revealed_cards;
  j["public_card"] = record.public_card ? nlohmann::json(*record.public_card)
                                        : nlohmann::json();
  j["outcome"] = record.outcome;
}

void from_json(const nlohmann::json& j, GameRecord& record) {
  const auto schema = j.at("schema").get<std::string>();
  if (schema != kRecordSchema) {
    throw CorruptRecord("unsupported record schema: " + schema);
  }
  record.game_index = j.at("game_index").get<int>();
  record.seed = j.at("seed").get<std::uint64_t>();
  record.small_blind = j.at("small_blind").get<int>();
  record.self_seat = j.at("self_seat").get<int>();
  record.rules = j.at("rules").get<Rules>();
  record.steps = j.at("steps").get<std::vector<RecordStep>>();
  record.revealed_cards =
      j.at("revealed_cards").get<std::array<Card, kNumPlayers>>();
  const auto& pub = j.at("public_card");
  record.public_card =
      pub.is_null() ? std::nullopt : std::optional<Card>(pub.get<Card>());
  record.outcome = j.at("outcome").get<Outcome>();
}

}  // namespace policyevol
