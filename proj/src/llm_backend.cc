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

#define CPPHTTPLIB_OPENSSL_SUPPORT
#include "policyevol/llm_backend.h"

#include <fmt/format.h>

#include <cstdlib>
#include <regex>
#include <thread>

#include "httplib.h"

namespace policyevol {
namespace {

bool Retriable(int status) { return status == 429 || status >= 500; }

}  // namespace

void BackendConfig::Validate() const {
  if (max_retries < 0) throw std::invalid_argument("max_retries must be >= 0");
  if (!(timeout_seconds > 0.0)) {
    throw std::invalid_argument("timeout must be positive");
  }
  if (rate_per_minute < 0.0) {
    throw std::invalid_argument("rate ceiling must be >= 0");
  }
}

HttpReply HttpTransport::Post(const std::string& url, const std::string& body,
                              const std::map<std::string, std::string>& headers,
                              double timeout_seconds) {
  static const std::regex kUrl(R"(^(https?://[^/]+)(/.*)?$)");
  std::smatch m;
  if (!std::regex_match(url, m, kUrl)) {
    throw TransportError("malformed endpoint: " + url);
  }
  httplib::Client client(m[1].str());
  const auto timeout = std::chrono::duration<double>(timeout_seconds);
  const auto secs = std::chrono::duration_cast<std::chrono::seconds>(timeout);
  const auto usecs =
      std::chrono::duration_cast<std::chrono::microseconds>(timeout - secs);
  client.set_connection_timeout(secs.count(), usecs.count());
  client.set_read_timeout(secs.count(), usecs.count());
  client.set_write_timeout(secs.count(), usecs.count());
  httplib::Headers h;
  for (const auto& [k, v] : headers) h.emplace(k, v);
  const std::string path = m[2].matched ? m[2].str() : "/";
  auto result = client.Post(path, h, body, "application/json");
  if (!result) {
    throw TransportError("request failed: " +
                         httplib::to_string(result.error()));
  }
  return {result->status, result->body};
}

nlohmann::json ChatBody(const BackendConfig& config,
                        const std::string& prompt) {
  nlohmann::json body = {
      {"model", config.model},
      {"temperature", config.temperature},
      {"messages",
       {{{"role", "system"}, {"content", kSystemMessage}},
        {{"role", "user"}, {"content", prompt}}}}};
  if (config.json_mode) body["response_format"] = {{"type", "json_object"}};
  return body;
}

std::string ChatContent(const std::string& body) {
  try {
    const auto j = nlohmann::json::parse(body);
    return j.at("choices").at(0).at("message").at("content").get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed chat reply: ") + e.what());
  }
}

LlmReasoner::LlmReasoner(BackendConfig config,
                         std::unique_ptr<Transport> transport, Sleeper sleeper,
                         Clock clock)
    : config_(std::move(config)),
      transport_(std::move(transport)),
      sleeper_(std::move(sleeper)),
      clock_(std::move(clock)) {
  config_.Validate();
  if (!sleeper_) {
    sleeper_ = [](std::chrono::duration<double> d) {
      std::this_thread::sleep_for(d);
    };
  }
  if (!clock_) clock_ = [] { return std::chrono::steady_clock::now(); };
}

void LlmReasoner::AwaitRateSlot() {
  if (config_.rate_per_minute <= 0.0) return;
  std::chrono::duration<double> wait{0.0};
  {
    std::lock_guard<std::mutex> lock(mu_);
    const auto now = clock_();
    const auto slot = std::max(now, next_slot_);
    wait = slot - now;
    next_slot_ = slot + std::chrono::duration_cast<
                            std::chrono::steady_clock::duration>(
                            std::chrono::duration<double>(
                                60.0 / config_.rate_per_minute));
  }
  if (wait.count() > 0.0) sleeper_(wait);
}

std::string LlmReasoner::Call(const std::string& prompt) {
  std::map<std::string, std::string> headers;
  // Read per call and kept out of every returned or logged value.
  if (const char* key = std::getenv(std::string(kApiKeyEnv).c_str())) {
    headers["Authorization"] = std::string("Bearer ") + key;
  }
  const std::string body = ChatBody(config_, prompt).dump();
  std::string last_cause;
  double backoff = 1.0;
  for (int attempt = 0; attempt <= config_.max_retries; ++attempt) {
    if (attempt > 0) {
      sleeper_(std::chrono::duration<double>(backoff));
      backoff *= 2.0;
    }
    AwaitRateSlot();
    HttpReply reply;
    try {
      ++requests_sent_;
      reply = transport_->Post(config_.endpoint, body, headers,
                               config_.timeout_seconds);
    } catch (const TransportError& e) {
      last_cause = e.what();
      continue;
    }
    if (reply.status >= 200 && reply.status < 300) {
      return ChatContent(reply.body);
    }
    last_cause = fmt::format("HTTP status {}", reply.status);
    if (!Retriable(reply.status)) break;
  }
  throw TransportError(last_cause);
}

ReasonerResponse LlmReasoner::Complete(const ReasonerRequest& request) {
  std::string cause;
  std::string text;
  try {
    Validate(request);
    text = Call(RenderPrompt(request));
    return InterpretModelText(request, text);
  } catch (const std::exception& e) {
    cause = e.what();
  }
  ReasonerResponse response = ScriptedAnswer(request);
  response.provenance = Provenance::kFallback;
  response.error = cause;
  if (!text.empty()) response.text = text;
  return response;
}

}  // namespace policyevol
