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

#ifndef POLICYEVOL_LLM_BACKEND_H_
#define POLICYEVOL_LLM_BACKEND_H_

#include <chrono>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>

#include "policyevol/reasoner.h"

namespace policyevol {

inline constexpr std::string_view kApiKeyEnv = "LLM_API_KEY";
inline constexpr std::string_view kSystemMessage =
    "You are an expert player of two-player Leduc Hold'em.";

struct BackendConfig {
  std::string endpoint = "https://api.openai.com/v1/chat/completions";
  std::string model = "gpt-4o-mini";
  double temperature = 0.7;
  int max_retries = 3;
  double timeout_seconds = 60.0;
  // Requests per minute; 0 disables the ceiling.
  double rate_per_minute = 60.0;
  bool json_mode = false;

  // Throws std::invalid_argument on negative retries or non-positive
  // timeout.
  void Validate() const;
};

struct HttpReply {
  int status = 0;
  std::string body;
};

class TransportError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class Transport {
 public:
  virtual ~Transport() = default;
  // Throws TransportError when no reply was received.
  virtual HttpReply Post(const std::string& url, const std::string& body,
                         const std::map<std::string, std::string>& headers,
                         double timeout_seconds) = 0;
};

// cpp-httplib client; https needs OpenSSL.
class HttpTransport : public Transport {
 public:
  HttpReply Post(const std::string& url, const std::string& body,
                 const std::map<std::string, std::string>& headers,
                 double timeout_seconds) override;
};

using Sleeper = std::function<void(std::chrono::duration<double>)>;
using Clock = std::function<std::chrono::steady_clock::time_point()>;

// Chat-completion request body for a rendered prompt.
nlohmann::json ChatBody(const BackendConfig& config, const std::string& prompt);
// Assistant text of a chat-completion reply; throws ParseError.
std::string ChatContent(const std::string& body);

class LlmReasoner : public Reasoner {
 public:
  LlmReasoner(BackendConfig config, std::unique_ptr<Transport> transport,
              Sleeper sleeper = nullptr, Clock clock = nullptr);

  // Renders the template, posts with retries (transport errors, 429 and
  // 5xx; backoff 1 s, 2 s, 4 s, ...), and reads the payload. Any failure
  // yields the scripted answer with provenance kFallback and the last
  // cause in `error`.
  ReasonerResponse Complete(const ReasonerRequest& request) override;
  bool reproducible() const override { return false; }
  std::string name() const override { return "llm:" + config_.model; }

  int requests_sent() const { return requests_sent_; }

 private:
  std::string Call(const std::string& prompt);
  void AwaitRateSlot();

  BackendConfig config_;
  std::unique_ptr<Transport> transport_;
  Sleeper sleeper_;
  Clock clock_;
  std::mutex mu_;
  std::chrono::steady_clock::time_point next_slot_{};
  int requests_sent_ = 0;
};

}  // namespace policyevol

#endif  // POLICYEVOL_LLM_BACKEND_H_
