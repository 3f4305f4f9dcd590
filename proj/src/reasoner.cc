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

#include "policyevol/reasoner.h"

#include <fmt/format.h>

#include <algorithm>
#include <cctype>
#include <regex>
#include <set>

#include "prompt_assets.h"

namespace policyevol {
namespace {

constexpr std::string_view kRuleText =
    "Two players share a six-card deck holding two Jacks, two Queens and "
    "two Kings (suits Spades and Hearts). Each player posts a blind (the "
    "small blind puts 1 chip, the big blind 2) and receives one private "
    "card. In the first betting round the small blind acts first. A raise "
    "adds 2 chips beyond the amount needed to match in the first round and "
    "4 in the second, and at most two raises are allowed per round. After "
    "the first round one public card is revealed and a second betting round "
    "follows. A player who folds loses the chips already in the pot. At "
    "showdown a private card that pairs the public card beats everything "
    "else; otherwise the higher rank wins (King > Queen > Jack) and equal "
    "ranks split the pot. Winning payoff: half of the pot. Lose payoff: half "
    "of the pot.";

constexpr std::string_view kObservationRuleText =
    "The observation is a dictionary. 'hand' is your private card and "
    "'public_card' the revealed board card or None; a card is written as "
    "suit then rank, S for Spades and H for Hearts, J, Q or K for the rank, "
    "so 'HK' is the King of Hearts. 'all_chips' lists the chips each seat "
    "has put into the pot, 'my_chips' is your own share, and 'legal_actions' "
    "lists what you may do now.";

std::string Lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(c));
  return out;
}

std::string Percent(double p) { return fmt::format("{:.1f}%", 100.0 * p); }

std::string Who(const ReasonerRequest& request) {
  auto it = request.placeholders.find("recipient_name");
  return it == request.placeholders.end() ? "the opponent" : it->second;
}

std::string JoinActions(std::span<const Action> actions) {
  std::string out;
  for (Action a : actions) {
    if (!out.empty()) out += ", ";
    out += ToString(a);
  }
  return out;
}

// Canonical lowercase label for a word, or the word itself.
std::string Canonical(const std::string& word) {
  static const std::map<std::string, std::string> kSynonyms = {
      {"raises", "raise"},  {"raising", "raise"},  {"raised", "raise"},
      {"bet", "raise"},     {"bets", "raise"},     {"betting", "raise"},
      {"calls", "call"},    {"calling", "call"},   {"called", "call"},
      {"checks", "check"},  {"checking", "check"}, {"checked", "check"},
      {"folds", "fold"},    {"folding", "fold"},   {"folded", "fold"},
      {"jack", "j"},        {"jacks", "j"},        {"queen", "q"},
      {"queens", "q"},      {"king", "k"},         {"kings", "k"},
      {"sj", "j"},          {"hj", "j"},           {"sq", "q"},
      {"hq", "q"},          {"sk", "k"},           {"hk", "k"},
  };
  const std::string lower = Lower(word);
  auto it = kSynonyms.find(lower);
  return it == kSynonyms.end() ? lower : it->second;
}

std::vector<std::string> ActionLabels() {
  std::vector<std::string> labels;
  for (Action a : kAllActions) labels.emplace_back(ToString(a));
  return labels;
}

// First legal action word at or after `from`, if any.
std::optional<Action> FirstActionWord(std::string_view text,
                                      std::span<const Action> legal) {
  static const std::regex kWord(
      R"(\b(raise[sd]?|raising|bet|calls?|called|calling|checks?|checked|checking|folds?|folded|folding)\b)",
      std::regex::icase);
  const std::string s(text);
  for (std::sregex_iterator it(s.begin(), s.end(), kWord), end; it != end;
       ++it) {
    const Action a = ParseAction(Canonical((*it)[1].str()));
    if (std::find(legal.begin(), legal.end(), a) != legal.end()) return a;
  }
  return std::nullopt;
}

void CheckInput(const ReasonerRequest& request) {
  if (request.input.index() != static_cast<std::size_t>(request.kind)) {
    throw std::invalid_argument(
        fmt::format("request kind {} carries the wrong input",
                    ToString(request.kind)));
  }
}

// Keeps the pre/post-reveal support of `shape` and pushes the rows through
// the joint so that unobserved rows keep the old values.
PolicyTable Conditioned(const PolicyTable& read, const HistoryDigest& digest,
                        Role role, const PolicyTable& old_table) {
  return Revise(JointFromConditionals(read, digest, role), digest, role,
                old_table);
}

}  // namespace

std::string_view ToString(RequestKind kind) {
  switch (kind) {
    case RequestKind::kInterpret:
      return "interpret";
    case RequestKind::kPatternEnv:
      return "pattern_env";
    case RequestKind::kPatternSelf:
      return "pattern_self";
    case RequestKind::kBeliefEnv:
      return "belief_env";
    case RequestKind::kBeliefSelf:
      return "belief_self";
    case RequestKind::kPlan:
      return "plan";
    case RequestKind::kReflect:
      return "reflect";
  }
  return "?";
}

std::string_view ToString(Provenance provenance) {
  switch (provenance) {
    case Provenance::kLlm:
      return "llm";
    case Provenance::kScripted:
      return "scripted";
    case Provenance::kFallback:
      return "fallback";
  }
  return "?";
}

std::string_view TemplateFor(RequestKind kind) {
  if (kind == RequestKind::kReflect) {
    return internal::PromptAsset("pattern_self");
  }
  return internal::PromptAsset(ToString(kind));
}

std::string_view GameRuleText() { return kRuleText; }
std::string_view ObservationRuleText() { return kObservationRuleText; }

std::vector<std::string> TemplatePlaceholders(std::string_view tmpl) {
  static const std::regex kSlot(R"(\{([A-Za-z_]+)\})");
  std::vector<std::string> names;
  const std::string s(tmpl);
  for (std::sregex_iterator it(s.begin(), s.end(), kSlot), end; it != end;
       ++it) {
    const std::string name = (*it)[1].str();
    if (std::find(names.begin(), names.end(), name) == names.end()) {
      names.push_back(name);
    }
  }
  return names;
}

std::string RenderTemplate(std::string_view tmpl, const Placeholders& values) {
  std::string out;
  out.reserve(tmpl.size() * 2);
  std::set<std::string> missing;
  std::size_t i = 0;
  while (i < tmpl.size()) {
    if (tmpl[i] == '{') {
      std::size_t j = i + 1;
      while (j < tmpl.size() &&
             (std::isalpha(static_cast<unsigned char>(tmpl[j])) ||
              tmpl[j] == '_')) {
        ++j;
      }
      if (j < tmpl.size() && j > i + 1 && tmpl[j] == '}') {
        const std::string name(tmpl.substr(i + 1, j - i - 1));
        auto it = values.find(name);
        if (it == values.end()) {
          missing.insert(name);
        } else {
          out += it->second;
        }
        i = j + 1;
        continue;
      }
    }
    out += tmpl[i++];
  }
  if (!missing.empty()) {
    std::string names;
    for (const auto& m : missing) names += (names.empty() ? "" : ", ") + m;
    throw TemplateError("missing placeholders: " + names);
  }
  return out;
}

void Validate(const ReasonerRequest& request) {
  CheckInput(request);
  std::string missing;
  for (const auto& name : TemplatePlaceholders(TemplateFor(request.kind))) {
    if (!request.placeholders.contains(name)) {
      missing += (missing.empty() ? "" : ", ") + name;
    }
  }
  if (!missing.empty()) {
    throw TemplateError("missing placeholders: " + missing);
  }
}

std::string RenderPrompt(const ReasonerRequest& request) {
  return RenderTemplate(TemplateFor(request.kind), request.placeholders);
}

ExtractedDistribution ExtractDistribution(
    std::string_view text, const std::vector<std::string>& labels) {
  static const std::regex kSpan(
      R"(([A-Za-z]+)\s*\(\s*(\d*\.?\d+)\s*(%?)\s*\))");
  ExtractedDistribution result;
  result.probs.assign(labels.size(), 0.0);
  std::vector<bool> seen(labels.size(), false);
  const std::string s(text);
  for (std::sregex_iterator it(s.begin(), s.end(), kSpan), end; it != end;
       ++it) {
    const std::string canonical = Canonical((*it)[1].str());
    for (std::size_t k = 0; k < labels.size(); ++k) {
      if (seen[k] || Lower(labels[k]) != canonical) continue;
      double v = std::stod((*it)[2].str());
      // Bare numbers above one are read as percentages too.
      if ((*it)[3].length() > 0 || v > 1.0) v /= 100.0;
      result.probs[k] = v;
      seen[k] = true;
    }
  }
  double total = 0.0;
  for (double p : result.probs) total += p;
  if (total <= 0.0) {
    throw ParseError("no labelled probabilities found");
  }
  for (double& p : result.probs) p /= total;
  for (std::size_t k = 0; k < labels.size(); ++k) {
    if (!seen[k]) {
      result.partial = true;
      result.unmatched.push_back(labels[k]);
    }
  }
  return result;
}

PatternReport ReadPatternText(std::string_view text,
                              const PatternReport& fallback) {
  static const std::regex kRankMention(
      R"(\b(?:[HS]?[JQK]|[Jj]acks?|[Qq]ueens?|[Kk]ings?)\b)");
  const std::string s(text);
  std::vector<std::pair<Rank, std::pair<std::size_t, std::size_t>>> mentions;
  for (std::sregex_iterator it(s.begin(), s.end(), kRankMention), end;
       it != end; ++it) {
    const std::string c = Canonical(it->str());
    mentions.push_back({ParseRank(std::string(1, static_cast<char>(
                                      std::toupper(c[0])))),
                        {static_cast<std::size_t>(it->position()),
                         static_cast<std::size_t>(it->position() +
                                                  it->length())}});
  }
  PatternReport report = fallback;
  std::array<int, kNumRanks> rows_read{};
  int total_rows = 0;
  const auto labels = ActionLabels();
  for (std::size_t m = 0; m < mentions.size(); ++m) {
    const Rank rank = mentions[m].first;
    int& n = rows_read[RankIndex(rank)];
    if (n >= kNumRounds) continue;
    const std::size_t begin = mentions[m].second.second;
    const std::size_t stop = m + 1 < mentions.size()
                                 ? mentions[m + 1].second.first
                                 : s.size();
    ExtractedDistribution d;
    try {
      d = ExtractDistribution(std::string_view(s).substr(begin, stop - begin),
                              labels);
    } catch (const ParseError&) {
      continue;
    }
    const Round round = static_cast<Round>(n);
    const SupportMask& support = report.table.support(round);
    ActionDistribution row{};
    double total = 0.0;
    for (int a = 0; a < kNumActions; ++a) {
      row[a] = support[a] ? d.probs[a] : 0.0;
      total += row[a];
    }
    if (total <= 0.0) continue;
    for (double& p : row) p /= total;
    report.table.SetRow(rank, round, row);
    ++n;
    ++total_rows;
  }
  if (total_rows == 0) {
    throw ParseError("no per-card action distribution found");
  }
  static const std::regex kAdverb(
      R"(\b(radically|conservatively|neutrally|flexibly)\b)",
      std::regex::icase);
  std::optional<Character> character;
  for (std::sregex_iterator it(s.begin(), s.end(), kAdverb), end; it != end;
       ++it) {
    character = ParseCharacter(Lower((*it)[1].str()));
  }
  report.character = character.value_or(ClassifyCharacter(report.table));
  report.rationale = fmt::format("read {} rows from model output", total_rows);
  return report;
}

BeliefReport ReadBeliefText(std::string_view text,
                            const BeliefReport& fallback) {
  const auto d = ExtractDistribution(text, {"J", "Q", "K"});
  BeliefReport report = fallback;
  for (int r = 0; r < kNumRanks; ++r) report.posterior[r] = d.probs[r];
  return report;
}

PlanReading ReadPlanText(std::string_view text,
                         std::span<const Action> legal) {
  static const std::regex kPlanHead(R"(Plan\s*(\d+))");
  static const std::regex kGain(R"(gain[^0-9+\-]*([+\-]?\d+(?:\.\d+)?))",
                                std::regex::icase);
  const std::string s(text);
  PlanReading reading;
  std::vector<std::size_t> heads;
  for (std::sregex_iterator it(s.begin(), s.end(), kPlanHead), end; it != end;
       ++it) {
    heads.push_back(static_cast<std::size_t>(it->position()));
  }
  const std::string lower = Lower(s);
  const std::size_t select_at = lower.rfind("select");
  for (std::size_t h = 0; h < heads.size(); ++h) {
    std::size_t stop = h + 1 < heads.size() ? heads[h + 1] : s.size();
    if (select_at != std::string::npos && select_at > heads[h]) {
      stop = std::min(stop, select_at);
    }
    const std::string segment = s.substr(heads[h], stop - heads[h]);
    const auto action = FirstActionWord(segment, legal);
    std::smatch m;
    if (!action || !std::regex_search(segment, m, kGain)) continue;
    const bool known = std::any_of(
        reading.gains.begin(), reading.gains.end(),
        [&](const auto& g) { return g.first == *action; });
    if (!known) reading.gains.push_back({*action, std::stod(m[1].str())});
  }
  std::optional<Action> selected;
  if (select_at != std::string::npos) {
    selected = FirstActionWord(std::string_view(s).substr(select_at), legal);
  }
  if (!selected && !reading.gains.empty()) {
    selected = std::max_element(reading.gains.begin(), reading.gains.end(),
                                [](const auto& a, const auto& b) {
                                  return a.second < b.second;
                                })
                   ->first;
  }
  if (!selected) throw ParseError("no plan selection found");
  reading.selected = *selected;
  return reading;
}

ReflectionNote ReadReflectionText(std::string_view text,
                                  const ReflectionNote& fallback) {
  static const std::regex kVerdict(R"(\b(right|wrong)\b)", std::regex::icase);
  ReflectionNote note = fallback;
  if (note.verdicts.empty()) return note;
  const std::string s(text);
  std::vector<bool> right;
  for (std::sregex_iterator it(s.begin(), s.end(), kVerdict), end; it != end;
       ++it) {
    right.push_back(Lower((*it)[1].str()) == "right");
  }
  if (right.size() < note.verdicts.size()) {
    throw ParseError(fmt::format("expected {} verdicts, found {}",
                                 note.verdicts.size(), right.size()));
  }
  for (std::size_t k = 0; k < note.verdicts.size(); ++k) {
    StepVerdict& v = note.verdicts[k];
    v.right = right[k];
    if (v.right) {
      v.counterfactual = 0.0;
      v.better.reset();
    }
    v.reason = "judged by the model";
  }
  return note;
}

std::string DescribeObservation(const RawObservation& obs) {
  const int pot = obs.all_chips[0] + obs.all_chips[1];
  return fmt::format(
      "You hold {}; {}; you contributed {} of {} chips; legal: {}",
      obs.hand.LongName(),
      obs.public_card ? "the public card is " + obs.public_card->LongName()
                      : std::string("no public card"),
      obs.my_chips, pot, JoinActions(obs.legal_actions));
}

std::string DescribePattern(const PolicyTable& table, Character character,
                            std::string_view who) {
  const bool self = who == "I";
  std::string out;
  for (int rd = 0; rd < kNumRounds; ++rd) {
    const Round round = static_cast<Round>(rd);
    out += rd == 0 ? "In the rounds with public card not released"
                   : " In the rounds with public card released";
    for (Rank rank : kAllRanks) {
      out += fmt::format("{} when {} {} {}, {} would like to",
                         rank == Rank::kJack ? "," : ";", who,
                         self ? "hold" : "holds", RankName(rank),
                         self ? "I" : "they");
      bool first = true;
      for (int a = 0; a < kNumActions; ++a) {
        if (!table.support(round)[a]) continue;
        out += fmt::format("{} {} ({})", first ? "" : ",",
                           ToString(kAllActions[a]),
                           Percent(table.row(rank, round)[a]));
        first = false;
      }
    }
    out += ".";
  }
  out += fmt::format(" To my knowledge, {} {} to act {}.", who,
                     self ? "tend" : "tends", Adverb(character));
  return out;
}

std::string DescribeBelief(const BeliefReport& belief, std::string_view who) {
  std::string out;
  for (const EvidenceStep& e : belief.evidence) {
    out += fmt::format("{} did {} in the {} round. ", who, ToString(e.action),
                       e.round == Round::kPreReveal ? "1st" : "2nd");
  }
  out += fmt::format("{} tends to have {} ({}), {} ({}), {} ({}).", who,
                     RankName(Rank::kJack), Percent(belief.posterior[0]),
                     RankName(Rank::kQueen), Percent(belief.posterior[1]),
                     RankName(Rank::kKing), Percent(belief.posterior[2]));
  if (!belief.best_combination.empty()) {
    out += " Best combination: " + belief.best_combination + ".";
  }
  return out;
}

std::string DescribePlans(const PlanChoice& choice) {
  std::string out;
  for (std::size_t i = 0; i < choice.ranked.size(); ++i) {
    const PlanEvaluation& p = choice.ranked[i];
    out += fmt::format(
        "Plan {}: {}. Winning rate {}, lose rate {}, draw rate {}. If win, "
        "the winning payoff would be {}; if lose, the lose payoff would be "
        "{}. Expected chips gain: {:.4f}.\n",
        i + 1, ToString(p.action), Percent(p.win_rate), Percent(p.lose_rate),
        Percent(p.draw_rate), p.win_payoff, p.lose_payoff, p.expected_gain);
  }
  out += "Plan Selection: ranking";
  for (std::size_t i = 0; i < choice.ranked.size(); ++i) {
    out += fmt::format("{} {}", i == 0 ? "" : " >",
                       ToString(choice.ranked[i].action));
  }
  out += fmt::format("; select {}.", ToString(choice.best.action));
  return out;
}

ReasonerResponse ScriptedAnswer(const ReasonerRequest& request) {
  CheckInput(request);
  ReasonerResponse response;
  response.provenance = Provenance::kScripted;
  switch (request.kind) {
    case RequestKind::kInterpret: {
      const auto& in = std::get<InterpretInput>(request.input);
      response.text = DescribeObservation(in.observation);
      break;
    }
    case RequestKind::kPatternEnv: {
      const auto& in = std::get<PatternEnvInput>(request.input);
      const JointTable joint = EvaluateJoint(in.old_pattern.table, in.digest,
                                             Role::kOpponent, in.params);
      PatternReport report;
      report.table = Revise(joint, in.digest, Role::kOpponent,
                            in.old_pattern.table);
      report.character = ClassifyCharacter(report.table);
      report.rationale = fmt::format(
          "revised from {} decisions in games [{}, {})",
          in.digest.decision_steps(), in.digest.window().begin,
          in.digest.window().end);
      response.text =
          DescribePattern(report.table, report.character, Who(request));
      response.structured = std::move(report);
      break;
    }
    case RequestKind::kPatternSelf: {
      const auto& in = std::get<PatternSelfInput>(request.input);
      PatternReport report = EvolveSelf(in.env_pattern, in.old_self, in.digest,
                                        in.params, in.shift_to_best_response);
      response.text = "Strategy Improvement: " + report.rationale + ". " +
                      DescribePattern(report.table, report.character, "I");
      response.structured = std::move(report);
      break;
    }
    case RequestKind::kBeliefEnv: {
      const auto& in = std::get<BeliefEnvInput>(request.input);
      BeliefReport belief = EnvironmentalBelief(
          in.observation, in.opponent_actions, in.pattern_env);
      response.text = DescribeBelief(belief, Who(request));
      response.structured = std::move(belief);
      break;
    }
    case RequestKind::kBeliefSelf: {
      const auto& in = std::get<BeliefSelfInput>(request.input);
      SelfBelief belief = MakeSelfBelief(in.observation, in.my_actions,
                                         in.pattern_self, in.env_belief);
      response.text = fmt::format(
          "If the cards were shown now I would win {}, draw {} and lose {}. "
          "{} {}",
          Percent(belief.win_now), Percent(belief.draw_now),
          Percent(belief.lose_now), belief.advantages, belief.long_term_note);
      response.structured = std::move(belief);
      break;
    }
    case RequestKind::kPlan: {
      const auto& in = std::get<PlanInput>(request.input);
      PlanChoice choice = SelectBest(
          EnumeratePlans(in.context, in.posterior, in.pattern_env,
                         in.pattern_self, in.options),
          in.style);
      response.text = DescribePlans(choice);
      response.structured = std::move(choice);
      break;
    }
    case RequestKind::kReflect: {
      const auto& in = std::get<ReflectInput>(request.input);
      ReflectionNote note = Reflect(in.record, in.pattern_env);
      std::string text = "Reflection:";
      for (std::size_t k = 0; k < note.verdicts.size(); ++k) {
        const StepVerdict& v = note.verdicts[k];
        text += fmt::format(" Step {} ({}): {}. {}.", k + 1,
                            ToString(v.action), v.right ? "right" : "wrong",
                            v.reason);
      }
      for (const auto& line : note.opponent_motivation) {
        text += " The " + line + ".";
      }
      response.text = std::move(text);
      response.structured = std::move(note);
      break;
    }
  }
  return response;
}

ReasonerResponse InterpretModelText(const ReasonerRequest& request,
                                    std::string text) {
  if (text.empty()) throw ParseError("empty model output");
  ReasonerResponse response = ScriptedAnswer(request);
  response.provenance = Provenance::kLlm;
  switch (request.kind) {
    case RequestKind::kInterpret:
      break;
    case RequestKind::kPatternEnv:
    case RequestKind::kPatternSelf: {
      const bool env = request.kind == RequestKind::kPatternEnv;
      const Role role = env ? Role::kOpponent : Role::kSelf;
      const HistoryDigest& digest =
          env ? std::get<PatternEnvInput>(request.input).digest
              : std::get<PatternSelfInput>(request.input).digest;
      const PolicyTable& old_table =
          env ? std::get<PatternEnvInput>(request.input).old_pattern.table
              : std::get<PatternSelfInput>(request.input).old_self.table;
      PatternReport read = ReadPatternText(
          text, std::get<PatternReport>(response.structured));
      read.table = Conditioned(read.table, digest, role, old_table);
      response.structured = std::move(read);
      break;
    }
    case RequestKind::kBeliefEnv: {
      const auto& in = std::get<BeliefEnvInput>(request.input);
      BeliefReport read =
          ReadBeliefText(text, std::get<BeliefReport>(response.structured));
      // Ranks with no unseen copy are impossible whatever the text says.
      const CardPrior prior = Prior(in.observation.hand,
                                    in.observation.public_card);
      double total = 0.0;
      for (int r = 0; r < kNumRanks; ++r) {
        if (prior.p[r] <= 0.0) read.posterior[r] = 0.0;
        total += read.posterior[r];
      }
      if (total <= 0.0) throw ParseError("belief puts no mass on live ranks");
      for (double& p : read.posterior) p /= total;
      response.structured = std::move(read);
      break;
    }
    case RequestKind::kBeliefSelf:
      std::get<SelfBelief>(response.structured).advantages = text;
      break;
    case RequestKind::kPlan: {
      const auto& in = std::get<PlanInput>(request.input);
      PlanReading reading =
          ReadPlanText(text, in.context.observation.legal_actions);
      auto& choice = std::get<PlanChoice>(response.structured);
      for (const auto& plan : choice.ranked) {
        if (plan.action == reading.selected) choice.best = plan;
      }
      choice.rationale =
          fmt::format("model selected {}", ToString(reading.selected));
      response.plan_reading = std::move(reading);
      break;
    }
    case RequestKind::kReflect:
      response.structured = ReadReflectionText(
          text, std::get<ReflectionNote>(response.structured));
      break;
  }
  response.text = std::move(text);
  return response;
}

void to_json(nlohmann::json& j, const ReasonerResponse& response) {
  j = {{"provenance", ToString(response.provenance)}, {"text", response.text}};
  std::visit(
      [&](const auto& payload) {
        using T = std::decay_t<decltype(payload)>;
        if constexpr (!std::is_same_v<T, std::monostate>) {
          j["structured"] = payload;
        }
      },
      response.structured);
  if (response.plan_reading) {
    nlohmann::json gains = nlohmann::json::object();
    for (const auto& [a, g] : response.plan_reading->gains) {
      gains[std::string(ToString(a))] = g;
    }
    j["plan_reading"] = {{"gains", gains},
                         {"selected", response.plan_reading->selected}};
  }
  if (!response.error.empty()) j["error"] = response.error;
}

}  // namespace policyevol
