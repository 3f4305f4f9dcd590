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

#ifndef POLICYEVOL_MEMORY_H_
#define POLICYEVOL_MEMORY_H_

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "policyevol/leduc.h"

namespace policyevol {

inline constexpr std::string_view kRecordSchema = "policyevol.record/1";

class CorruptRecord : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RecordStep {
  int player = 0;
  Round round = Round::kPreReveal;
  RawObservation observation;
  Action action = Action::kFold;
  std::optional<std::string> say;
  friend bool operator==(const RecordStep&, const RecordStep&) = default;
};

// One finished game as remembered by one seat. Cards are revealed for both
// players after the game, whatever the ending.
struct GameRecord {
  int game_index = 0;
  std::uint64_t seed = 0;
  int small_blind = 0;
  int self_seat = 0;
  Rules rules;
  std::vector<RecordStep> steps;
  std::array<Card, kNumPlayers> revealed_cards;
  std::optional<Card> public_card;
  Outcome outcome;

  int opponent_seat() const { return 1 - self_seat; }
  friend bool operator==(const GameRecord&, const GameRecord&) = default;
};

// Builds a record from a finished state and the per-step observations that
// were shown to the actors.
GameRecord MakeRecord(const GameState& final_state, int game_index,
                      int self_seat, std::vector<RecordStep> steps);

// Re-deals from the record's seed and replays every step, checking legality,
// observation snapshots, revealed cards and the outcome. Throws CorruptRecord.
GameState ReplayRecord(const GameRecord& record);

enum class Role : std::uint8_t { kOpponent = 0, kSelf = 1 };

struct GameWindow {
  std::size_t begin = 0;
  std::size_t end = 0;  // exclusive
  std::size_t size() const { return end - begin; }
  friend bool operator==(const GameWindow&, const GameWindow&) = default;
};

// Action counts keyed by (role, card rank, round, action). Suits carry no
// strength in Leduc, so card type is the rank alone.
class HistoryDigest {
 public:
  HistoryDigest() = default;
  explicit HistoryDigest(GameWindow window) : window_(window) {}

  const GameWindow& window() const { return window_; }
  bool empty() const { return decision_steps_ == 0; }

  int count(Role role, Rank rank, Round round, Action action) const {
    return counts_[static_cast<int>(role)][RankIndex(rank)][RoundIndex(round)]
                  [ActionIndex(action)];
  }
  int row_total(Role role, Rank rank, Round round) const;
  int context_total(Role role, Round round) const;
  int decision_steps() const { return decision_steps_; }
  // Self net chips after each game in the window, cumulative.
  const std::vector<int>& chip_trajectory() const { return chip_trajectory_; }

  void AddRecord(const GameRecord& record);
  // Direct tally without a record, for synthetic samples.
  void AddCount(Role role, Rank rank, Round round, Action action, int n = 1);
  // Window union; counts add, trajectories concatenate.
  HistoryDigest& operator+=(const HistoryDigest& other);

  friend bool operator==(const HistoryDigest&, const HistoryDigest&) = default;

 private:
  GameWindow window_;
  std::array<std::array<std::array<std::array<int, kNumActions>, kNumRounds>,
                        kNumRanks>,
             2>
      counts_{};
  int decision_steps_ = 0;
  std::vector<int> chip_trajectory_;
};

// Append-only game memory, optionally mirrored to a JSONL file (one record
// per line, schema-tagged).
class MemoryStore {
 public:
  MemoryStore() = default;
  explicit MemoryStore(std::filesystem::path path);

  // Validates by replay before appending; throws CorruptRecord.
  void Append(GameRecord record);

  std::size_t size() const { return records_.size(); }
  const GameRecord& at(std::size_t i) const { return records_.at(i); }
  std::span<const GameRecord> records() const { return records_; }
  const std::optional<std::filesystem::path>& path() const { return path_; }

  // Reads every line of a JSONL record file, replay-validating each.
  static MemoryStore Load(const std::filesystem::path& path);

 private:
  std::vector<GameRecord> records_;
  std::optional<std::filesystem::path> path_;
};

// Digest over records [window.begin, window.end). Throws std::out_of_range
// when the window exceeds the store; an empty window gives an empty digest.
HistoryDigest Digest(const MemoryStore& store, GameWindow window);
HistoryDigest Digest(std::span<const GameRecord> records, GameWindow window);

// Last `history_window` games (all when absent).
GameWindow TrailingWindow(std::size_t store_size,
                          std::optional<std::size_t> history_window);

void to_json(nlohmann::json& j, const RecordStep& step);
void from_json(const nlohmann::json& j, RecordStep& step);
void to_json(nlohmann::json& j, const GameRecord& record);
void from_json(const nlohmann::json& j, GameRecord& record);

}  // namespace policyevol

#endif  // POLICYEVOL_MEMORY_H_
