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

#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>

#include <cstdlib>
#include <fstream>
#include <thread>

#include "cwm/core/hash.hpp"
#include "cwm/core/value.hpp"
#include "cwm/llm/client.hpp"

namespace cwm::llm {
namespace {

struct Endpoint {
  std::string base;  // scheme://host[:port]
  std::string path;
};

Endpoint split_endpoint(const std::string& url) {
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) throw LlmError("endpoint must be an http(s) URL: " + url);
  const auto path_start = url.find('/', scheme_end + 3);
  if (path_start == std::string::npos) return {url, "/"};
  return {url.substr(0, path_start), url.substr(path_start)};
}

std::string env_or_empty(const char* name) {
  const char* v = std::getenv(name);
  return v == nullptr ? std::string() : std::string(v);
}

}  // namespace

std::string redact(std::string text, const std::vector<std::string>& secrets) {
  for (const auto& secret : secrets) {
    if (secret.empty()) continue;
    for (auto pos = text.find(secret); pos != std::string::npos; pos = text.find(secret, pos)) {
      text.replace(pos, secret.size(), "[REDACTED]");
      pos += 10;
    }
  }
  return text;
}

std::string parse_completion_body(const std::string& body) {
  try {
    const Value v = parse_value(body);
    const Value& choice = v.at("choices").at(0);
    if (choice.contains("message")) return choice.at("message").at("content").get<std::string>();
    return choice.at("text").get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw LlmError(std::string("unexpected completion response: ") + e.what());
  }
}

HttpClientConfig HttpClientConfig::from_env() {
  HttpClientConfig config;
  config.endpoint = env_or_empty("CWM_LLM_ENDPOINT");
  config.api_key = env_or_empty("CWM_LLM_API_KEY");
  config.model = env_or_empty("CWM_LLM_MODEL");
  return config;
}

HttpCompletionClient::HttpCompletionClient(HttpClientConfig config)
    : config_(std::move(config)), jitter_state_(splitmix64(config_.jitter_seed)) {
  if (config_.endpoint.empty()) throw LlmUnavailable("no completion endpoint configured (set CWM_LLM_ENDPOINT)");
  if (config_.max_attempts < 1) config_.max_attempts = 1;
  if (!config_.sleep) config_.sleep = [](std::chrono::milliseconds d) { std::this_thread::sleep_for(d); };
  if (config_.log_dir) std::filesystem::create_directories(*config_.log_dir);
}

std::string HttpCompletionClient::complete(const CompletionRequest& request) {
  const Endpoint endpoint = split_endpoint(config_.endpoint);
  const std::string model = request.model_name.empty() ? config_.model : request.model_name;
  Value body{{"model", model},
             {"messages", Value::array({Value{{"role", "user"}, {"content", request.prompt}}})},
             {"temperature", request.temperature},
             {"max_tokens", request.max_output_tokens}};
  const std::string payload = body.dump();
  httplib::Headers headers;
  if (!config_.api_key.empty()) headers.emplace("Authorization", "Bearer " + config_.api_key);

  const int log_index = log_counter_.fetch_add(1);
  auto log = [&](const std::string& suffix, const std::string& text) {
    if (!config_.log_dir) return;
    std::ofstream out(*config_.log_dir / ("http_" + std::to_string(log_index) + "_" + suffix + ".txt"));
    out << redact(text, {config_.api_key});
  };
  log("request", "POST " + config_.endpoint + "\nAuthorization: Bearer " + config_.api_key + "\n\n" + payload);

  std::string last_error;
  bool last_was_rate_limit = false;
  for (int attempt = 0; attempt < config_.max_attempts; ++attempt) {
    if (attempt > 0) {
      const auto base = config_.base_backoff * (1LL << (attempt - 1));
      std::uint64_t r;
      {
        std::lock_guard<std::mutex> lock(jitter_mutex_);
        jitter_state_ = splitmix64(jitter_state_);
        r = jitter_state_;
      }
      const auto jitter = std::chrono::milliseconds(
          base.count() > 0 ? static_cast<long long>(r % static_cast<std::uint64_t>(base.count() / 2 + 1)) : 0);
      backoffs_.fetch_add(1);
      config_.sleep(base + jitter);
    }
    httplib::Client client(endpoint.base);
    client.set_connection_timeout(config_.timeout);
    client.set_read_timeout(config_.timeout);
    client.set_write_timeout(config_.timeout);
    auto result = client.Post(endpoint.path, headers, payload, "application/json");
    if (!result) {
      last_error = "transport error: " + httplib::to_string(result.error());
      last_was_rate_limit = false;
      continue;
    }
    log("response_" + std::to_string(attempt), std::to_string(result->status) + "\n\n" + result->body);
    if (result->status == 401 || result->status == 403) {
      throw AuthFailure("completion service rejected credentials (HTTP " + std::to_string(result->status) + ")");
    }
    if (result->status == 429) {
      last_error = "rate limited (HTTP 429)";
      last_was_rate_limit = true;
      continue;
    }
    if (result->status >= 500) {
      last_error = "server error (HTTP " + std::to_string(result->status) + ")";
      last_was_rate_limit = false;
      continue;
    }
    if (result->status != 200) {
      throw LlmError("completion request failed (HTTP " + std::to_string(result->status) +
                     "): " + redact(result->body, {config_.api_key}));
    }
    return parse_completion_body(result->body);
  }
  const std::string message =
      "completion failed after " + std::to_string(config_.max_attempts) + " attempts: " + last_error;
  if (last_was_rate_limit) throw RateLimited(message);
  throw NetworkTimeout(message);
}

}  // namespace cwm::llm
