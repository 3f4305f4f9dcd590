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

#include "policyevol/baselines.h"

#include <fmt/format.h>

#include <algorithm>
#include <numeric>

namespace policyevol {
namespace {

using RankVector = std::array<double, kNumRanks>;

// Number of copies of each rank in the deck.
constexpr int kCopies = kNumCards / kNumRanks;

// Betting tree shared by every deal; the board branches on rank only and
// card removal enters through the deal weights at the leaves.
struct PublicNode {
  enum class Kind : std::uint8_t { kDecision, kChance, kTerminal };
  Kind kind = Kind::kTerminal;
  int player = 0;  // position: 0 small blind, 1 big blind
  int board = -1;  // rank index once revealed
  std::string history;
  std::vector<Action> actions;
  std::vector<int> children;
  std::size_t offset = 0;  // into the per-(rank, action) tables
  // Leaf payoff for position t holding rank i against rank j, already
  // multiplied by the deal probability.
  std::array<std::array<RankVector, kNumRanks>, kNumPlayers> leaf{};
};

class PublicTree {
 public:
  explicit PublicTree(const Rules& rules) : rules_(rules) {
    Deal deal;
    deal.private_cards = {Card::Parse("SJ"), Card::Parse("SQ")};
    deal.board = Card::Parse("SK");
    Build(NewGameWithDeal(deal, /*small_blind=*/0, rules), -1);
  }

  const std::vector<PublicNode>& nodes() const { return nodes_; }
  std::size_t table_size() const { return table_size_; }
  const Rules& rules() const { return rules_; }

  std::string KeyOf(const PublicNode& node, int rank) const {
    InfoSetKey key;
    key.own = static_cast<Rank>(rank);
    if (node.board >= 0) key.board = static_cast<Rank>(node.board);
    key.history = node.history;
    return key.ToString();
  }

 private:
  int Build(const GameState& state, int board) {
    const int id = static_cast<int>(nodes_.size());
    nodes_.emplace_back();
    PublicNode node;
    node.board = board;
    std::string history;
    Round round = Round::kPreReveal;
    for (const HistoryStep& step : state.history()) {
      if (step.round != round) {
        history += '/';
        round = step.round;
      }
      history += HistoryLetter(step.action);
    }
    if (!state.terminal() && state.round() == Round::kPostReveal &&
        round == Round::kPreReveal) {
      history += '/';
    }
    node.history = history;
    if (state.terminal()) {
      FillLeaf(state, board, node);
      nodes_[id] = std::move(node);
      return id;
    }
    node.kind = PublicNode::Kind::kDecision;
    node.player = state.to_act();
    node.actions = LegalActions(state);
    node.offset = table_size_;
    table_size_ += kNumRanks * node.actions.size();
    for (Action a : node.actions) {
      const GameState next = ApplyAction(state, a);
      if (!next.terminal() && next.round() != state.round()) {
        const int chance = static_cast<int>(nodes_.size());
        nodes_.emplace_back();
        PublicNode c;
        c.kind = PublicNode::Kind::kChance;
        for (int k = 0; k < kNumRanks; ++k) c.children.push_back(Build(next, k));
        nodes_[chance] = std::move(c);
        node.children.push_back(chance);
      } else {
        node.children.push_back(Build(next, board));
      }
    }
    nodes_[id] = std::move(node);
    return id;
  }

  static void FillLeaf(const GameState& state, int board, PublicNode& node) {
    const Outcome& o = *state.outcome();
    const auto& contrib = state.contributions();
    for (int i = 0; i < kNumRanks; ++i) {    // small blind rank
      for (int j = 0; j < kNumRanks; ++j) {  // big blind rank
        double weight;
        if (board < 0) {
          weight = kCopies * (kCopies - (i == j)) / 30.0;
        } else {
          const int left = kCopies - (board == i) - (board == j);
          weight = kCopies * (kCopies - (i == j)) * std::max(0, left) / 120.0;
        }
        double sb;
        if (o.kind == OutcomeKind::kFold) {
          sb = o.winner == 0 ? contrib[1] : -contrib[0];
        } else {
          const int cmp = CompareHands(static_cast<Rank>(i),
                                       static_cast<Rank>(j),
                                       static_cast<Rank>(board));
          sb = cmp > 0 ? contrib[1] : (cmp < 0 ? -contrib[0] : 0.0);
        }
        node.leaf[0][i][j] = weight * sb;
        node.leaf[1][j][i] = -weight * sb;
      }
    }
  }

  Rules rules_;
  std::vector<PublicNode> nodes_;
  std::size_t table_size_ = 0;
};

enum class Mode : std::uint8_t { kCfr, kBestResponse, kEvaluate };

class Walker {
 public:
  Walker(const PublicTree& tree, std::vector<double>* regrets,
         std::vector<double>* strategy_sum, const std::vector<double>* fixed)
      : tree_(tree), regrets_(regrets), sum_(strategy_sum), fixed_(fixed) {}

  // Counterfactual values for `t` at each of its ranks; `reach` holds each
  // position's own contribution to reaching the node.
  RankVector Walk(int id, int t, const std::array<RankVector, 2>& reach,
                  Mode mode) {
    const PublicNode& node = tree_.nodes()[id];
    RankVector v{};
    switch (node.kind) {
      case PublicNode::Kind::kTerminal: {
        const RankVector& opp = reach[1 - t];
        for (int i = 0; i < kNumRanks; ++i) {
          for (int j = 0; j < kNumRanks; ++j) {
            v[i] += node.leaf[t][i][j] * opp[j];
          }
        }
        return v;
      }
      case PublicNode::Kind::kChance: {
        for (int child : node.children) {
          const RankVector c = Walk(child, t, reach, mode);
          for (int i = 0; i < kNumRanks; ++i) v[i] += c[i];
        }
        return v;
      }
      case PublicNode::Kind::kDecision:
        break;
    }
    const int p = node.player;
    const std::size_t n = node.actions.size();
    std::array<std::array<double, kNumActions>, kNumRanks> sigma{};
    for (int i = 0; i < kNumRanks; ++i) {
      const std::size_t base = node.offset + i * n;
      if (mode == Mode::kCfr) {
        // Regret matching without the allocation of RegretMatching().
        double total = 0.0;
        for (std::size_t a = 0; a < n; ++a) {
          sigma[i][a] = std::max(0.0, (*regrets_)[base + a]);
          total += sigma[i][a];
        }
        for (std::size_t a = 0; a < n; ++a) {
          sigma[i][a] = total > 0.0 ? sigma[i][a] / total : 1.0 / n;
        }
      } else {
        std::copy_n(fixed_->data() + base, n, sigma[i].begin());
      }
    }
    std::array<RankVector, kNumActions> child_values{};
    for (std::size_t a = 0; a < n; ++a) {
      std::array<RankVector, 2> next = reach;
      for (int i = 0; i < kNumRanks; ++i) next[p][i] *= sigma[i][a];
      child_values[a] = Walk(node.children[a], t, next, mode);
    }
    if (p != t || mode == Mode::kEvaluate) {
      for (std::size_t a = 0; a < n; ++a) {
        for (int i = 0; i < kNumRanks; ++i) {
          v[i] += p == t ? sigma[i][a] * child_values[a][i]
                         : child_values[a][i];
        }
      }
      return v;
    }
    if (mode == Mode::kBestResponse) {
      for (int i = 0; i < kNumRanks; ++i) {
        v[i] = child_values[0][i];
        for (std::size_t a = 1; a < n; ++a) {
          v[i] = std::max(v[i], child_values[a][i]);
        }
      }
      return v;
    }
    for (int i = 0; i < kNumRanks; ++i) {
      for (std::size_t a = 0; a < n; ++a) v[i] += sigma[i][a] * child_values[a][i];
      const std::size_t base = node.offset + i * n;
      for (std::size_t a = 0; a < n; ++a) {
        (*regrets_)[base + a] += child_values[a][i] - v[i];
        (*sum_)[base + a] += reach[p][i] * sigma[i][a];
      }
    }
    return v;
  }

 private:
  const PublicTree& tree_;
  std::vector<double>* regrets_;
  std::vector<double>* sum_;
  const std::vector<double>* fixed_;
};

constexpr std::array<RankVector, 2> kFullReach = {RankVector{1, 1, 1},
                                                  RankVector{1, 1, 1}};

// Policy rows laid out like the regret tables.
std::vector<double> Flatten(const PublicTree& tree,
                            const TabularPolicy& policy) {
  std::vector<double> flat(tree.table_size(), 0.0);
  for (const PublicNode& node : tree.nodes()) {
    if (node.kind != PublicNode::Kind::kDecision) continue;
    for (int i = 0; i < kNumRanks; ++i) {
      const auto& row = policy.at(tree.KeyOf(node, i));
      for (std::size_t a = 0; a < node.actions.size(); ++a) {
        for (const auto& [action, p] : row) {
          if (action == node.actions[a]) {
            flat[node.offset + i * node.actions.size() + a] = p;
          }
        }
      }
    }
  }
  return flat;
}

TabularPolicy Unflatten(const PublicTree& tree, const std::vector<double>& t,
                        bool normalize) {
  TabularPolicy policy;
  policy.rules = tree.rules();
  for (const PublicNode& node : tree.nodes()) {
    if (node.kind != PublicNode::Kind::kDecision) continue;
    const std::size_t n = node.actions.size();
    for (int i = 0; i < kNumRanks; ++i) {
      const double* row = t.data() + node.offset + i * n;
      std::vector<double> probs(row, row + n);
      if (normalize) {
        const double total = std::accumulate(probs.begin(), probs.end(), 0.0);
        for (double& p : probs) p = total > 0.0 ? p / total : 1.0 / n;
      } else {
        probs = RegretMatching(probs);
      }
      auto& out = policy.rows[tree.KeyOf(node, i)];
      for (std::size_t a = 0; a < n; ++a) {
        out.push_back({node.actions[a], probs[a]});
      }
    }
  }
  return policy;
}

double SumOf(const RankVector& v) { return v[0] + v[1] + v[2]; }

}  // namespace

std::vector<double> RegretMatching(std::span<const double> regrets) {
  std::vector<double> out(regrets.size(), 0.0);
  double total = 0.0;
  for (std::size_t a = 0; a < regrets.size(); ++a) {
    out[a] = std::max(0.0, regrets[a]);
    total += out[a];
  }
  for (double& p : out) {
    p = total > 0.0 ? p / total : 1.0 / static_cast<double>(regrets.size());
  }
  return out;
}

char HistoryLetter(Action action) {
  switch (action) {
    case Action::kRaise:
      return 'r';
    case Action::kCall:
      return 'c';
    case Action::kCheck:
      return 'k';
    case Action::kFold:
      return 'f';
  }
  return '?';
}

std::string InfoSetKey::ToString() const {
  return fmt::format("{}|{}|{}", RankLetter(own),
                     board ? RankLetter(*board) : '-', history);
}

InfoSetKey InfoSetKey::Parse(std::string_view text) {
  const auto a = text.find('|');
  const auto b = a == std::string_view::npos ? a : text.find('|', a + 1);
  if (b == std::string_view::npos || a != 1 || b != 3) {
    throw std::invalid_argument("malformed info set key: " + std::string(text));
  }
  InfoSetKey key;
  key.own = ParseRank(text.substr(0, 1));
  if (text[2] != '-') key.board = ParseRank(text.substr(2, 1));
  key.history = std::string(text.substr(4));
  return key;
}

InfoSetKey MakeInfoSetKey(Rank own, std::optional<Rank> board,
                          std::span<const HistoryStep> history) {
  InfoSetKey key;
  key.own = own;
  key.board = board;
  Round round = Round::kPreReveal;
  for (const HistoryStep& step : history) {
    if (step.round != round) {
      key.history += '/';
      round = step.round;
    }
    key.history += HistoryLetter(step.action);
  }
  if (board && round == Round::kPreReveal) key.history += '/';
  return key;
}

InfoSetKey MakeInfoSetKey(const DecisionContext& context) {
  std::optional<Rank> board;
  if (context.observation.public_card) {
    board = context.observation.public_card->rank;
  }
  return MakeInfoSetKey(context.observation.hand.rank, board, context.history);
}

const std::vector<std::pair<Action, double>>& TabularPolicy::at(
    const std::string& key) const {
  auto it = rows.find(key);
  if (it == rows.end()) {
    throw std::out_of_range("policy does not cover info set " + key);
  }
  return it->second;
}

void to_json(nlohmann::json& j, const TabularPolicy& policy) {
  nlohmann::json rows = nlohmann::json::object();
  for (const auto& [key, row] : policy.rows) {
    nlohmann::json r = nlohmann::json::object();
    for (const auto& [a, p] : row) r[std::string(ToString(a))] = p;
    rows[key] = r;
  }
  j = {{"schema", kCfrSchema},
       {"iterations", policy.iterations},
       {"seed", policy.seed},
       {"round2_first_actor", ToString(policy.rules.round2_first_actor)},
       {"infosets", rows}};
}

void from_json(const nlohmann::json& j, TabularPolicy& policy) {
  if (j.at("schema").get<std::string>() != kCfrSchema) {
    throw std::invalid_argument("unsupported policy schema");
  }
  policy.iterations = j.at("iterations").get<long>();
  policy.seed = j.at("seed").get<std::uint64_t>();
  policy.rules.round2_first_actor =
      ParseRound2FirstActor(j.at("round2_first_actor").get<std::string>());
  policy.rows.clear();
  for (const auto& [key, row] : j.at("infosets").items()) {
    auto& out = policy.rows[key];
    for (const auto& [a, p] : row.items()) {
      out.push_back({ParseAction(a), p.get<double>()});
    }
    // Engine order: call, raise, fold facing a bet; raise, fold, check when
    // level. One ranking covers both.
    auto order = [](Action a) {
      switch (a) {
        case Action::kCall: return 0;
        case Action::kRaise: return 1;
        case Action::kFold: return 2;
        case Action::kCheck: return 3;
      }
      return 4;
    };
    std::sort(out.begin(), out.end(), [&](const auto& x, const auto& y) {
      return order(x.first) < order(y.first);
    });
  }
}

struct CfrSolver::Impl {
  explicit Impl(const Rules& rules)
      : tree(rules),
        regrets(tree.table_size(), 0.0),
        strategy_sum(tree.table_size(), 0.0) {}
  PublicTree tree;
  std::vector<double> regrets;
  std::vector<double> strategy_sum;
  long iterations = 0;
  std::uint64_t seed = 0;
};

CfrSolver::CfrSolver(const Rules& rules, std::uint64_t seed)
    : impl_(std::make_unique<Impl>(rules)) {
  impl_->seed = seed;
}
CfrSolver::~CfrSolver() = default;
CfrSolver::CfrSolver(CfrSolver&&) noexcept = default;
CfrSolver& CfrSolver::operator=(CfrSolver&&) noexcept = default;

void CfrSolver::Iterate(long n) {
  Walker walker(impl_->tree, &impl_->regrets, &impl_->strategy_sum, nullptr);
  for (long it = 0; it < n; ++it) {
    for (int t = 0; t < kNumPlayers; ++t) walker.Walk(0, t, kFullReach, Mode::kCfr);
    ++impl_->iterations;
  }
}

long CfrSolver::iterations() const { return impl_->iterations; }

std::size_t CfrSolver::num_info_sets() const {
  std::size_t n = 0;
  for (const auto& node : impl_->tree.nodes()) {
    n += node.kind == PublicNode::Kind::kDecision ? kNumRanks : 0;
  }
  return n;
}

TabularPolicy CfrSolver::AverageStrategy() const {
  TabularPolicy policy = Unflatten(impl_->tree, impl_->strategy_sum, true);
  policy.iterations = impl_->iterations;
  policy.seed = impl_->seed;
  return policy;
}

TabularPolicy CfrSolver::CurrentStrategy() const {
  TabularPolicy policy = Unflatten(impl_->tree, impl_->regrets, false);
  policy.iterations = impl_->iterations;
  policy.seed = impl_->seed;
  return policy;
}

TabularPolicy CfrTrain(long iterations, std::uint64_t seed,
                       const Rules& rules) {
  if (iterations < 1) throw std::invalid_argument("iterations must be >= 1");
  CfrSolver solver(rules, seed);
  solver.Iterate(iterations);
  return solver.AverageStrategy();
}

std::vector<std::string> AllInfoSetKeys(const Rules& rules) {
  std::vector<std::string> keys;
  for (const auto& [key, row] : UniformPolicy(rules).rows) keys.push_back(key);
  return keys;
}

TabularPolicy UniformPolicy(const Rules& rules) {
  const PublicTree tree(rules);
  return Unflatten(tree, std::vector<double>(tree.table_size(), 0.0), false);
}

double BestResponseValue(const TabularPolicy& policy, int position) {
  const PublicTree tree(policy.rules);
  const std::vector<double> flat = Flatten(tree, policy);
  Walker walker(tree, nullptr, nullptr, &flat);
  return SumOf(walker.Walk(0, position, kFullReach, Mode::kBestResponse));
}

double Exploitability(const TabularPolicy& policy) {
  return (BestResponseValue(policy, 0) + BestResponseValue(policy, 1)) / 2.0;
}

double SelfPlayValue(const TabularPolicy& policy) {
  const PublicTree tree(policy.rules);
  const std::vector<double> flat = Flatten(tree, policy);
  Walker walker(tree, nullptr, nullptr, &flat);
  return SumOf(walker.Walk(0, 0, kFullReach, Mode::kEvaluate));
}

Action RandomAgent::Decide(const DecisionContext& context, Rng& rng) {
  const auto& legal = context.observation.legal_actions;
  return legal[UniformBelow(rng, legal.size())];
}

Situation SituationOf(const DecisionContext& context) {
  const auto& chips = context.observation.all_chips;
  const int me = context.seat;
  if (chips[me] >= chips[1 - me]) return Situation::kOpen;
  for (auto it = context.history.rbegin(); it != context.history.rend(); ++it) {
    if (it->player != me && it->action == Action::kRaise) {
      return Situation::kFacingRaise;
    }
    if (it->player == me) break;
  }
  return Situation::kFacingBlind;
}

RuleTable RuleTable::Default() {
  RuleTable t;
  t.intent[RankIndex(Rank::kKing)] = {Action::kRaise, Action::kRaise,
                                      Action::kRaise};
  t.intent[RankIndex(Rank::kQueen)] = {Action::kCall, Action::kCall,
                                       Action::kCall};
  t.intent[RankIndex(Rank::kJack)] = {Action::kCheck, Action::kCall,
                                      Action::kFold};
  return t;
}

RuleTable RuleTable::Always(Action action) {
  RuleTable t;
  for (auto& row : t.intent) row = {action, action, action};
  return t;
}

RuleTable RuleTable::Parse(std::string_view text) {
  RuleTable t = Default();
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find(',', pos);
    if (end == std::string_view::npos) end = text.size();
    const std::string_view item = text.substr(pos, end - pos);
    if (item.size() != 5 || item[1] != '=') {
      throw std::invalid_argument("malformed rule item: " + std::string(item));
    }
    auto& row = t.intent[RankIndex(ParseRank(item.substr(0, 1)))];
    for (int s = 0; s < 3; ++s) {
      bool found = false;
      for (Action a : kAllActions) {
        if (HistoryLetter(a) == item[2 + s]) {
          row[s] = a;
          found = true;
        }
      }
      if (!found) {
        throw std::invalid_argument("unknown action letter in " +
                                    std::string(item));
      }
    }
    pos = end + 1;
  }
  return t;
}

std::string RuleTable::ToString() const {
  std::string out;
  for (Rank rank : {Rank::kKing, Rank::kQueen, Rank::kJack}) {
    if (!out.empty()) out += ',';
    out += RankLetter(rank);
    out += '=';
    for (Action a : intent[RankIndex(rank)]) out += HistoryLetter(a);
  }
  return out;
}

Action ResolveIntent(Action intent, std::span<const Action> legal) {
  auto legal_has = [&](Action a) {
    return std::find(legal.begin(), legal.end(), a) != legal.end();
  };
  if (legal_has(intent)) return intent;
  if (intent == Action::kRaise || intent == Action::kCheck) {
    if (legal_has(Action::kCall)) return Action::kCall;
    if (legal_has(Action::kCheck)) return Action::kCheck;
  }
  if (intent == Action::kCall && legal_has(Action::kCheck)) {
    return Action::kCheck;
  }
  return legal.front();
}

Action RuleAgent::Decide(const DecisionContext& context, Rng& /*rng*/) {
  const auto& intents = table_.intent[RankIndex(context.observation.hand.rank)];
  return ResolveIntent(intents[static_cast<int>(SituationOf(context))],
                       context.observation.legal_actions);
}

Action CfrAgent::Decide(const DecisionContext& context, Rng& rng) {
  const auto& row = policy_->at(MakeInfoSetKey(context).ToString());
  const auto& legal = context.observation.legal_actions;
  std::vector<double> weights(legal.size(), 0.0);
  for (std::size_t i = 0; i < legal.size(); ++i) {
    for (const auto& [a, p] : row) {
      if (a == legal[i]) weights[i] = p;
    }
  }
  return legal[SampleIndex(rng, weights)];
}

}  // namespace policyevol
