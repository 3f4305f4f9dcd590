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

#ifndef POLICYEVOL_TESTS_SUPPORT_STUB_TRANSPORT_H_
#define POLICYEVOL_TESTS_SUPPORT_STUB_TRANSPORT_H_

#include <fstream>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "policyevol/llm_backend.h"
#include "policyevol/reasoner.h"

namespace policyevol::testing {

struct SentRequest {
  std::string url;
  std::string body;
  std::map<std::string, std::string> headers;
};

// Replays scripted replies in order (the last one repeats); an empty
// script means every call fails at the transport level.
class StubTransport : public Transport {
 public:
  explicit StubTransport(std::vector<HttpReply> replies,
                         std::shared_ptr<std::vector<SentRequest>> log)
      : replies_(std::move(replies)), log_(std::move(log)) {}

  HttpReply Post(const std::string& url, const std::string& body,
                 const std::map<std::string, std::string>& headers,
                 double /*timeout_seconds*/) override {
    log_->push_back({url, body, headers});
    if (replies_.empty()) throw TransportError("connection refused");
    const HttpReply reply = replies_[std::min(next_, replies_.size() - 1)];
    ++next_;
    return reply;
  }

 private:
  std::vector<HttpReply> replies_;
  std::size_t next_ = 0;
  std::shared_ptr<std::vector<SentRequest>> log_;
};

inline HttpReply ChatReply(const std::string& content) {
  nlohmann::json j = {
      {"choices", {{{"message", {{"role", "assistant"}, {"content", content}}}}}}};
  return {200, j.dump()};
}

inline std::string ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

inline std::string GoldenDir() {
  return std::string(POLICYEVOL_SOURCE_DIR) + "/tests/golden/";
}

inline Placeholders GoldenPlaceholders() {
  const auto j = nlohmann::json::parse(ReadFile(GoldenDir() + "placeholders.json"));
  return j.at("common").get<Placeholders>();
}

}  // namespace policyevol::testing

#endif  // POLICYEVOL_TESTS_SUPPORT_STUB_TRANSPORT_H_
