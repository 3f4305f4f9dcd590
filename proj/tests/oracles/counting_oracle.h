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

// One-pass counter over serialized records. Works on the JSON form only, so
// it shares no code with the digest.

#ifndef POLICYEVOL_TESTS_ORACLES_COUNTING_ORACLE_H_
#define POLICYEVOL_TESTS_ORACLES_COUNTING_ORACLE_H_

#include <map>
#include <string>
#include <tuple>

#include "json.hpp"

namespace policyevol::oracle {

// Key: (role "self"/"opponent", rank letter, round name, action word).
using CountKey = std::tuple<std::string, char, std::string, std::string>;

inline std::map<CountKey, int> CountRecords(const nlohmann::json& records) {
  std::map<CountKey, int> counts;
  for (const auto& rec : records) {
    const int self = rec["self_seat"].get<int>();
    for (const auto& step : rec["steps"]) {
      const int player = step["player"].get<int>();
      const std::string card = rec["revealed_cards"][player].get<std::string>();
      ++counts[{player == self ? "self" : "opponent", card[1],
                step["round"].get<std::string>(),
                step["action"].get<std::string>()}];
    }
  }
  return counts;
}

// Unsmoothed frequency P(action | rank, round) for one role; rows without
// data are absent.
inline std::map<CountKey, double> Frequencies(
    const std::map<CountKey, int>& counts, const std::string& role) {
  std::map<std::tuple<char, std::string>, int> totals;
  for (const auto& [key, n] : counts) {
    if (std::get<0>(key) == role) {
      totals[{std::get<1>(key), std::get<2>(key)}] += n;
    }
  }
  std::map<CountKey, double> freq;
  for (const auto& [key, n] : counts) {
    if (std::get<0>(key) != role) continue;
    freq[key] = static_cast<double>(n) /
                totals.at({std::get<1>(key), std::get<2>(key)});
  }
  return freq;
}

}  // namespace policyevol::oracle

#endif  // POLICYEVOL_TESTS_ORACLES_COUNTING_ORACLE_H_
