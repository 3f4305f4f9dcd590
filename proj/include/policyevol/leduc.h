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

#ifndef POLICYEVOL_LEDUC_H_
#define POLICYEVOL_LEDUC_H_

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace policyevol {

inline constexpr int kNumPlayers = 2;
inline constexpr int kNumRanks = 3;
inline constexpr int kNumSuits = 2;
inline constexpr int kNumCards = kNumRanks * kNumSuits;
inline constexpr int kNumActions = 4;
inline constexpr int kNumRounds = 2;
inline constexpr int kSmallBlindChips = 1;
inline constexpr int kBigBlindChips = 2;
inline constexpr int kMaxRaisesPerRound = 2;

// Thrown for rule violations: illegal actions, acting on finished games,
// settling unfinished ones.
class GameError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

enum class Rank : std::uint8_t { kJack = 0, kQueen = 1, kKing = 2 };
enum class Suit : std::uint8_t { kSpades = 0, kHearts = 1 };

inline constexpr std::array<Rank, kNumRanks> kAllRanks = {
    Rank::kJack, Rank::kQueen, Rank::kKing};

char RankLetter(Rank rank);
std::string_view RankName(Rank rank);  // "Jack", "Queen", "King"
Rank ParseRank(std::string_view text);
inline int RankIndex(Rank rank) { return static_cast<int>(rank); }

struct Card {
  Rank rank = Rank::kJack;
  Suit suit = Suit::kSpades;

  // Dense index in [0, 6): suit-major, so SJ=0 ... HK=5.
  int index() const {
    return static_cast<int>(suit) * kNumRanks + static_cast<int>(rank);
  }
  static Card FromIndex(int index);
  // Suit letter followed by rank letter, e.g. "SJ", "HK".
  std::string ToString() const;
  // "King of Hearts".
  std::string LongName() const;
  static Card Parse(std::string_view text);

  friend bool operator==(const Card&, const Card&) = default;
};

enum class Action : std::uint8_t { kRaise = 0, kCall = 1, kCheck = 2, kFold = 3 };

inline constexpr std::array<Action, kNumActions> kAllActions = {
    Action::kRaise, Action::kCall, Action::kCheck, Action::kFold};

inline int ActionIndex(Action action) { return static_cast<int>(action); }
std::string_view ToString(Action action);
Action ParseAction(std::string_view text);
char ActionLetter(Action action);

enum class Round : std::uint8_t { kPreReveal = 0, kPostReveal = 1 };
inline int RoundIndex(Round round) { return static_cast<int>(round); }
std::string_view ToString(Round round);

// Who opens the post-reveal betting round.
enum class Round2FirstActor : std::uint8_t {
  kSmallBlind,
  kBigBlind,
  // The player after the one whose action closed the pre-reveal round.
  kAfterCloser,
};
std::string_view ToString(Round2FirstActor actor);
Round2FirstActor ParseRound2FirstActor(std::string_view text);

struct Rules {
  Round2FirstActor round2_first_actor = Round2FirstActor::kSmallBlind;
  friend bool operator==(const Rules&, const Rules&) = default;
};

enum class OutcomeKind : std::uint8_t { kShowdown, kFold };

struct Outcome {
  OutcomeKind kind = OutcomeKind::kShowdown;
  std::optional<int> winner;  // absent on a draw
  std::array<int, kNumPlayers> net = {0, 0};

  // Half-pot scale used by the human-readable game logs.
  double logged_payoff(int player) const { return net[player] / 2.0; }
  friend bool operator==(const Outcome&, const Outcome&) = default;
};

// The three cards fixed by one shuffle at game start. The board card stays
// hidden until the post-reveal round opens.
struct Deal {
  std::array<Card, kNumPlayers> private_cards;
  Card board;
  friend bool operator==(const Deal&, const Deal&) = default;
};

struct HistoryStep {
  int player = 0;
  Action action = Action::kFold;
  Round round = Round::kPreReveal;
  friend bool operator==(const HistoryStep&, const HistoryStep&) = default;
};

// Player-visible view of a state. all_chips is ordered by seat index.
struct RawObservation {
  Card hand;
  std::optional<Card> public_card;
  std::array<int, kNumPlayers> all_chips = {0, 0};
  int my_chips = 0;
  std::vector<Action> legal_actions;

  // Dictionary rendering used in game logs and prompts, e.g.
  // {'hand': 'HK', 'public_card': None, 'all_chips': [2, 1], ...}.
  std::string ToPythonRepr() const;
  friend bool operator==(const RawObservation&, const RawObservation&) =
      default;
};

class GameState {
 public:
  std::uint64_t seed() const { return seed_; }
  int small_blind() const { return small_blind_; }
  int big_blind() const { return 1 - small_blind_; }
  const Rules& rules() const { return rules_; }
  const Deal& deal() const { return deal_; }
  Card private_card(int player) const { return deal_.private_cards[player]; }
  // Absent iff the round is pre-reveal.
  std::optional<Card> public_card() const;
  const std::array<int, kNumPlayers>& contributions() const {
    return contributions_;
  }
  int pot() const { return contributions_[0] + contributions_[1]; }
  Round round() const { return round_; }
  int raises_this_round() const { return raises_this_round_; }
  int actions_this_round() const { return actions_this_round_; }
  int to_act() const { return to_act_; }
  const std::vector<HistoryStep>& history() const { return history_; }
  bool terminal() const { return outcome_.has_value(); }
  const std::optional<Outcome>& outcome() const { return outcome_; }

  friend bool operator==(const GameState&, const GameState&) = default;

 private:
  friend GameState NewGameWithDeal(const Deal&, int, Rules, std::uint64_t);
  friend GameState ApplyAction(const GameState&, Action);
  friend Outcome Settle(const GameState&);

  enum class Ending : std::uint8_t { kNone, kFold, kShowdown };

  std::uint64_t seed_ = 0;
  int small_blind_ = 0;
  Rules rules_;
  Deal deal_;
  std::array<int, kNumPlayers> contributions_ = {0, 0};
  Round round_ = Round::kPreReveal;
  int raises_this_round_ = 0;
  int actions_this_round_ = 0;
  int to_act_ = 0;
  std::vector<HistoryStep> history_;
  Ending ending_ = Ending::kNone;
  int folder_ = -1;
  std::optional<Outcome> outcome_;
};

// Seeded Fisher-Yates shuffle of the 6-card deck; the first two cards go to
// seats 0 and 1, the third becomes the board card.
Deal DealFromSeed(std::uint64_t seed);

GameState NewGame(std::uint64_t seed, int small_blind, Rules rules = {});
GameState NewGameWithDeal(const Deal& deal, int small_blind, Rules rules = {},
                          std::uint64_t seed = 0);

// Facing a bet: call, raise, fold. Even contributions: raise, fold, check.
// Raise is dropped once the round's two-raise cap is reached.
std::vector<Action> LegalActions(const GameState& state);
bool IsLegal(const GameState& state, Action action);

// Returns the successor state; throws GameError naming the violated rule.
GameState ApplyAction(const GameState& state, Action action);

// Fold: the folder forfeits its contribution. Showdown: a private card
// pairing the board wins, otherwise the higher rank, equal ranks draw.
Outcome Settle(const GameState& state);

RawObservation Observe(const GameState& state, int player);

// Showdown comparison from the first holder's perspective: +1 win, 0 draw,
// -1 loss.
int CompareHands(Rank mine, Rank theirs, Rank board);

void to_json(nlohmann::json& j, const Card& card);
void from_json(const nlohmann::json& j, Card& card);
void to_json(nlohmann::json& j, const Action& action);
void from_json(const nlohmann::json& j, Action& action);
void to_json(nlohmann::json& j, const RawObservation& obs);
void from_json(const nlohmann::json& j, RawObservation& obs);
void to_json(nlohmann::json& j, const Outcome& outcome);
void from_json(const nlohmann::json& j, Outcome& outcome);
void to_json(nlohmann::json& j, const HistoryStep& step);
void from_json(const nlohmann::json& j, HistoryStep& step);
void to_json(nlohmann::json& j, const Rules& rules);
void from_json(const nlohmann::json& j, Rules& rules);

}  // namespace policyevol

#endif  // POLICYEVOL_LEDUC_H_
