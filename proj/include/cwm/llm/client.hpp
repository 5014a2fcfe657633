// Copyright 2026 The CWM Arena Authors. All rights reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef CWM_LLM_CLIENT_HPP_
#define CWM_LLM_CLIENT_HPP_

#include <atomic>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "cwm/core/errors.hpp"

namespace cwm::llm {

class LlmError : public Error {
 public:
  using Error::Error;
};
class NetworkTimeout : public LlmError {
 public:
  using LlmError::LlmError;
};
class RateLimited : public LlmError {
 public:
  using LlmError::LlmError;
};
class CacheMiss : public LlmError {
 public:
  using LlmError::LlmError;
};
class AuthFailure : public LlmError {
 public:
  using LlmError::LlmError;
};
class ScriptExhausted : public LlmError {
 public:
  using LlmError::LlmError;
};
class LlmUnavailable : public LlmError {
 public:
  using LlmError::LlmError;
};

struct CompletionRequest {
  std::string prompt;
  double temperature = 1.0;
  int max_output_tokens = 8192;
  std::string model_name;
  std::string request_id;
};

// A text-completion service. Implementations are shareable across threads.
class LlmClient {
 public:
  virtual ~LlmClient() = default;
  virtual std::string complete(const CompletionRequest& request) = 0;
};

// Returns the scripted responses in order, then raises ScriptExhausted.
class ScriptedMock : public LlmClient {
 public:
  explicit ScriptedMock(std::vector<std::string> script) : script_(std::move(script)) {}
  std::string complete(const CompletionRequest& request) override;
  int calls() const { return calls_.load(); }
  const std::vector<std::string>& prompts() const { return prompts_; }

 private:
  std::vector<std::string> script_;
  std::vector<std::string> prompts_;
  std::atomic<int> calls_{0};
  std::mutex mutex_;
};

// Computes each response from (call index, request). Used by harnesses whose
// replies depend on the prompt.
class FunctionMock : public LlmClient {
 public:
  using Responder = std::function<std::string(int call_index, const CompletionRequest&)>;
  explicit FunctionMock(Responder responder) : responder_(std::move(responder)) {}
  std::string complete(const CompletionRequest& request) override;
  int calls() const { return calls_.load(); }

 private:
  Responder responder_;
  std::atomic<int> calls_{0};
};

// Content-addressed store of completions, one file per key.
class ReplayCache {
 public:
  explicit ReplayCache(std::filesystem::path dir);

  // Lower-case hex SHA-256 of the canonical {model, prompt, temperature}.
  static std::string key(const CompletionRequest& request);

  std::optional<std::string> lookup(const CompletionRequest& request) const;
  void store(const CompletionRequest& request, const std::string& response);
  const std::filesystem::path& dir() const { return dir_; }

 private:
  std::filesystem::path dir_;
  mutable std::mutex mutex_;
};

enum class CacheMode {
  kLive,    // always call the service, store every completion
  kReplay,  // serve from the cache only; a miss is an error
  kCached,  // serve hits, call the service on a miss and store
};

CacheMode cache_mode_from_string(const std::string& text);

// Wraps a client with a replay cache. `inner` may be null in replay mode.
class CachingClient : public LlmClient {
 public:
  CachingClient(std::shared_ptr<LlmClient> inner, std::shared_ptr<ReplayCache> cache, CacheMode mode);
  std::string complete(const CompletionRequest& request) override;

 private:
  std::shared_ptr<LlmClient> inner_;
  std::shared_ptr<ReplayCache> cache_;
  CacheMode mode_;
};

struct HttpClientConfig {
  std::string endpoint;  // e.g. https://host/v1/chat/completions
  std::string api_key;
  std::string model;
  std::chrono::seconds timeout{120};
  int max_attempts = 5;
  std::chrono::milliseconds base_backoff{1000};
  std::uint64_t jitter_seed = 0;
  // Request/response bodies are written here (secrets redacted) when set.
  std::optional<std::filesystem::path> log_dir;
  // Replaceable for tests.
  std::function<void(std::chrono::milliseconds)> sleep;

  // Reads CWM_LLM_ENDPOINT, CWM_LLM_API_KEY and CWM_LLM_MODEL.
  static HttpClientConfig from_env();
};

// Chat-completion client. Transport errors, 429 and 5xx responses are retried
// with exponential backoff (base · 2^k plus up to 50% jitter); 401/403 fail
// immediately with AuthFailure.
class HttpCompletionClient : public LlmClient {
 public:
  explicit HttpCompletionClient(HttpClientConfig config);
  std::string complete(const CompletionRequest& request) override;
  int backoffs() const { return backoffs_.load(); }

 private:
  HttpClientConfig config_;
  std::atomic<int> backoffs_{0};
  std::atomic<int> log_counter_{0};
  std::mutex jitter_mutex_;
  std::uint64_t jitter_state_;
};

// Replaces every occurrence of each non-empty secret with "[REDACTED]".
std::string redact(std::string text, const std::vector<std::string>& secrets);

// Extracts the completion text from a chat-completion response body.
std::string parse_completion_body(const std::string& body);

}  // namespace cwm::llm

#endif  // CWM_LLM_CLIENT_HPP_
