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

#include "policyevol/leduc.h"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <sstream>

#include "policyevol/rng.h"

namespace policyevol {
namespace {

std::string Lower(std::string_view text) {
  std::string out(text);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return out;
}

int RaiseAmount(Round round) { return round == Round::kPreReveal ? 2 : 4; }

}  // namespace

char RankLetter(Rank rank) {
  switch (rank) {
    case Rank::kJack:
      return 'J';
    case Rank::kQueen:
      return 'Q';
    case Rank::kKing:
      return 'K';
  }
  return '?';
}

std::string_view RankName(Rank rank) {
  switch (rank) {
    case Rank::kJack:
      return "Jack";
    case Rank::kQueen:
      return "Queen";
    case Rank::kKing:
      return "King";
  }
  return "?";
}

Rank ParseRank(std::string_view text) {
  const std::string lower = Lower(text);
  if (lower == "j" || lower == "jack") return Rank::kJack;
  if (lower == "q" || lower == "queen") return Rank::kQueen;
  if (lower == "k" || lower == "king") return Rank::kKing;
  throw std::invalid_argument("unknown rank: " + std::string(text));
}

Card Card::FromIndex(int index) {
  if (index < 0 || index >= kNumCards) {
    throw std::out_of_range("card index out of range: " +
                            std::to_string(index));
  }
  return Card{static_cast<Rank>(index % kNumRanks),
              static_cast<Suit>(index / kNumRanks)};
}

std::string Card::ToString() const {
  std::string out;
  out += suit == Suit::kSpades ? 'S' : 'H';
  out += RankLetter(rank);
  return out;
}

std::string Card::LongName() const {
  return std::string(RankName(rank)) + " of " +
         (suit == Suit::kSpades ? "Spades" : "Hearts");
}

Card Card::Parse(std::string_view text) {
  if (text.size() != 2) {
    throw std::invalid_argument("malformed card: " + std::string(text));
  }
  Card card;
  switch (text[0]) {
    case 'S':
      card.suit = Suit::kSpades;
      break;
    case 'H':
      card.suit = Suit::kHearts;
      break;
    default:
      throw std::invalid_argument("unknown suit in card: " +
                                  std::string(text));
  }
  card.rank = ParseRank(text.substr(1));
  return card;
}

std::string_view ToString(Action action) {
  switch (action) {
    case Action::kRaise:
      return "raise";
    case Action::kCall:
      return "call";
    case Action::kCheck:
      return "check";
    case Action::kFold:
      return "fold";
  }
  return "?";
}

char ActionLetter(Action action) { return ToString(action)[0]; }

Action ParseAction(std::string_view text) {
  const std::string lower = Lower(text);
  for (Action action : kAllActions) {
    if (lower == ToString(action)) return action;
  }
  throw std::invalid_argument("unknown action: " + std::string(text));
}

std::string_view ToString(Round round) {
  return round == Round::kPreReveal ? "pre_reveal" : "post_reveal";
}

std::string_view ToString(Round2FirstActor actor) {
  switch (actor) {
    case Round2FirstActor::kSmallBlind:
      return "small_blind";
    case Round2FirstActor::kBigBlind:
      return "big_blind";
    case Round2FirstActor::kAfterCloser:
      return "after_closer";
  }
  return "?";
}

Round2FirstActor ParseRound2FirstActor(std::string_view text) {
  for (auto actor : {Round2FirstActor::kSmallBlind, Round2FirstActor::kBigBlind,
                     Round2FirstActor::kAfterCloser}) {
    if (text == ToString(actor)) return actor;
  }
  throw std::invalid_argument("unknown round2_first_actor: " +
                              std::string(text));
}

std::string RawObservation::ToPythonRepr() const {
  std::ostringstream out;
  out << "{'hand': '" << hand.ToString() << "', 'public_card': ";
  if (public_card) {
    out << "'" << public_card->ToString() << "'";
  } else {
    out << "None";
  }
  out << ", 'all_chips': [" << all_chips[0] << ", " << all_chips[1]
      << "], 'my_chips': " << my_chips << ", 'legal_actions': [";
  for (size_t i = 0; i < legal_actions.size(); ++i) {
    if (i > 0) out << ", ";
    out << "'" << ToString(legal_actions[i]) << "'";
  }
  out << "]}";
  return out.str();
}

std::optional<Card> GameState::public_card() const {
  if (round_ == Round::kPreReveal) return std::nullopt;
  return deal_.board;
}

Deal DealFromSeed(std::uint64_t seed) {
  std::array<int, kNumCards> deck;
  std::iota(deck.begin(), deck.end(), 0);
  Rng rng(seed);
  for (int i = kNumCards - 1; i > 0; --i) {
    const int j = static_cast<int>(UniformBelow(rng, i + 1));
    std::swap(deck[i], deck[j]);
  }
  return Deal{{Card::FromIndex(deck[0]), Card::FromIndex(deck[1])},
              Card::FromIndex(deck[2])};
}

GameState NewGame(std::uint64_t seed, int small_blind, Rules rules) {
  return NewGameWithDeal(DealFromSeed(seed), small_blind, rules, seed);
}

GameState NewGameWithDeal(const Deal& deal, int small_blind, Rules rules,
                          std::uint64_t seed) {
  if (small_blind != 0 && small_blind != 1) {
    throw std::invalid_argument("small blind must be seat 0 or 1");
  }
  const int a = deal.private_cards[0].index();
  const int b = deal.private_cards[1].index();
  const int c = deal.board.index();
  if (a == b || a == c || b == c) {
    throw std::invalid_argument("deal contains duplicate cards");
  }
  GameState state;
  state.seed_ = seed;
  state.small_blind_ = small_blind;
  state.rules_ = rules;
  state.deal_ = deal;
  state.contributions_[small_blind] = kSmallBlindChips;
  state.contributions_[1 - small_blind] = kBigBlindChips;
  state.to_act_ = small_blind;
  return state;
}

std::vector<Action> LegalActions(const GameState& state) {
  if (state.terminal()) throw GameError("game over: no legal actions");
  const int me = state.to_act();
  const auto& chips = state.contributions();
  const bool can_raise = state.raises_this_round() < kMaxRaisesPerRound;
  std::vector<Action> actions;
  if (chips[1 - me] > chips[me]) {
    actions.push_back(Action::kCall);
    if (can_raise) actions.push_back(Action::kRaise);
    actions.push_back(Action::kFold);
  } else {
    if (can_raise) actions.push_back(Action::kRaise);
    actions.push_back(Action::kFold);
    actions.push_back(Action::kCheck);
  }
  return actions;
}

bool IsLegal(const GameState& state, Action action) {
  if (state.terminal()) return false;
  const auto legal = LegalActions(state);
  return std::find(legal.begin(), legal.end(), action) != legal.end();
}

GameState ApplyAction(const GameState& state, Action action) {
  if (state.terminal()) throw GameError("game over: no further actions");
  const int me = state.to_act_;
  const int opp = 1 - me;
  const bool even = state.contributions_[me] == state.contributions_[opp];
  const std::string name(ToString(action));
  switch (action) {
    case Action::kRaise:
      if (state.raises_this_round_ >= kMaxRaisesPerRound) {
        throw GameError("illegal action '" + name +
                        "': two-raise cap reached this round");
      }
      break;
    case Action::kCall:
      if (even) {
        throw GameError("illegal action '" + name +
                        "': call requires facing a larger contribution");
      }
      break;
    case Action::kCheck:
      if (!even) {
        throw GameError("illegal action '" + name +
                        "': check requires equal contributions");
      }
      break;
    case Action::kFold:
      break;
  }

  GameState next = state;
  next.history_.push_back(HistoryStep{me, action, state.round_});
  ++next.actions_this_round_;
  switch (action) {
    case Action::kRaise:
      next.contributions_[me] =
          next.contributions_[opp] + RaiseAmount(state.round_);
      ++next.raises_this_round_;
      break;
    case Action::kCall:
      next.contributions_[me] = next.contributions_[opp];
      break;
    case Action::kCheck:
      break;
    case Action::kFold:
      next.ending_ = GameState::Ending::kFold;
      next.folder_ = me;
      next.outcome_ = Settle(next);
      return next;
  }

  const bool closes = (action == Action::kCall || action == Action::kCheck) &&
                      next.contributions_[0] == next.contributions_[1] &&
                      next.actions_this_round_ >= kNumPlayers;
  if (!closes) {
    next.to_act_ = opp;
    return next;
  }
  if (state.round_ == Round::kPostReveal) {
    next.ending_ = GameState::Ending::kShowdown;
    next.outcome_ = Settle(next);
    return next;
  }
  next.round_ = Round::kPostReveal;
  next.raises_this_round_ = 0;
  next.actions_this_round_ = 0;
  switch (state.rules_.round2_first_actor) {
    case Round2FirstActor::kSmallBlind:
      next.to_act_ = state.small_blind_;
      break;
    case Round2FirstActor::kBigBlind:
      next.to_act_ = 1 - state.small_blind_;
      break;
    case Round2FirstActor::kAfterCloser:
      next.to_act_ = opp;
      break;
  }
  return next;
}

int CompareHands(Rank mine, Rank theirs, Rank board) {
  const bool my_pair = mine == board;
  const bool their_pair = theirs == board;
  if (my_pair != their_pair) return my_pair ? 1 : -1;
  if (mine == theirs) return 0;
  return RankIndex(mine) > RankIndex(theirs) ? 1 : -1;
}

Outcome Settle(const GameState& state) {
  Outcome outcome;
  const auto& chips = state.contributions_;
  switch (state.ending_) {
    case GameState::Ending::kNone:
      throw GameError("cannot settle: game is still in progress");
    case GameState::Ending::kFold: {
      const int loser = state.folder_;
      const int winner = 1 - loser;
      outcome.kind = OutcomeKind::kFold;
      outcome.winner = winner;
      outcome.net[winner] = chips[loser];
      outcome.net[loser] = -chips[loser];
      return outcome;
    }
    case GameState::Ending::kShowdown: {
      outcome.kind = OutcomeKind::kShowdown;
      const int cmp = CompareHands(state.deal_.private_cards[0].rank,
                                   state.deal_.private_cards[1].rank,
                                   state.deal_.board.rank);
      if (cmp == 0) return outcome;
      const int winner = cmp > 0 ? 0 : 1;
      const int loser = 1 - winner;
      outcome.winner = winner;
      outcome.net[winner] = chips[loser];
      outcome.net[loser] = -chips[loser];
      return outcome;
    }
  }
  return outcome;
}

RawObservation Observe(const GameState& state, int player) {
  if (state.terminal()) throw GameError("game over: nothing to observe");
  if (player != 0 && player != 1) {
    throw std::invalid_argument("player must be seat 0 or 1");
  }
  RawObservation obs;
  obs.hand = state.private_card(player);
  obs.public_card = state.public_card();
  obs.all_chips = state.contributions();
  obs.my_chips = state.contributions()[player];
  obs.legal_actions = LegalActions(state);
  return obs;
}

void to_json(nlohmann::json& j, const Card& card) { j = card.ToString(); }
void from_json(const nlohmann::json& j, Card& card) {
  card = Card::Parse(j.get<std::string>());
}

void to_json(nlohmann::json& j, const Action& action) {
  j = std::string(ToString(action));
}
void from_json(const nlohmann::json& j, Action& action) {
  action = ParseAction(j.get<std::string>());
}

void to_json(nlohmann::json& j, const RawObservation& obs) {
  j = nlohmann::json::object();
  j["hand"] = obs.hand;
  j["public_card"] =
      obs.public_card ? nlohmann::json(*obs.public_card) : nlohmann::json();
  j["all_chips"] = obs.all_chips;
  j["my_chips"] = obs.my_chips;
  j["legal_actions"] = obs.legal_actions;
}

void from_json(const nlohmann::json& j, RawObservation& obs) {
  obs.hand = j.at("hand").get<Card>();
  const auto& pub = j.at("public_card");
  obs.public_card =
      pub.is_null() ? std::nullopt : std::optional<Card>(pub.get<Card>());
  obs.all_chips = j.at("all_chips").get<std::array<int, kNumPlayers>>();
  obs.my_chips = j.at("my_chips").get<int>();
  obs.legal_actions = j.at("legal_actions").get<std::vector<Action>>();
}

void to_json(nlohmann::json& j, const Outcome& outcome) {
  j = nlohmann::json::object();
  j["kind"] = outcome.kind == OutcomeKind::kFold ? "fold" : "showdown";
  j["winner"] =
      outcome.winner ? nlohmann::json(*outcome.winner) : nlohmann::json();
  j["net"] = outcome.net;
  j["logged_payoff"] = {outcome.logged_payoff(0), outcome.logged_payoff(1)};
}

void from_json(const nlohmann::json& j, Outcome& outcome) {
  const auto kind = j.at("kind").get<std::string>();
  if (kind == "fold") {
    outcome.kind = OutcomeKind::kFold;
  } else if (kind == "showdown") {
    outcome.kind = OutcomeKind::kShowdown;
  } else {
    throw std::invalid_argument("unknown outcome kind: " + kind);
  }
  const auto& winner = j.at("winner");
  outcome.winner =
      winner.is_null() ? std::nullopt : std::optional<int>(winner.get<int>());
  outcome.net = j.at("net").get<std::array<int, kNumPlayers>>();
}

void to_json(nlohmann::json& j, const HistoryStep& step) {
  j = {{"player", step.player},
       {"action", step.action},
       {"round", std::string(ToString(step.round))}};
}

void from_json(const nlohmann::json& j, HistoryStep& step) {
  step.player = j.at("player").get<int>();
  step.action = j.at("action").get<Action>();
  step.round = j.at("round").get<std::string>() == "pre_reveal"
                   ? Round::kPreReveal
                   : Round::kPostReveal;
}

void to_json(nlohmann::json& j, const Rules& rules) {
  j = {{"round2_first_actor", std::string(ToString(rules.round2_first_actor))}};
}

void from_json(const nlohmann::json& j, Rules& rules) {
  rules.round2_first_actor =
      ParseRound2FirstActor(j.at("round2_first_actor").get<std::string>());
}

}  // namespace policyevol
