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

#include <openssl/evp.h>

#include <fstream>
#include <sstream>

#include "cwm/core/value.hpp"
#include "cwm/llm/client.hpp"

namespace cwm::llm {
namespace {

std::string sha256_hex(const std::string& data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &length, EVP_sha256(), nullptr) != 1) {
    throw LlmError("SHA-256 digest failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < length; ++i) {
    out += kHex[digest[i] >> 4];
    out += kHex[digest[i] & 0xF];
  }
  return out;
}

}  // namespace

ReplayCache::ReplayCache(std::filesystem::path dir) : dir_(std::move(dir)) {
  std::filesystem::create_directories(dir_);
}

std::string ReplayCache::key(const CompletionRequest& request) {
  // Temperature is keyed by its shortest round-trip text so 0.7 and 0.70
  // agree while 0.7 and 0.71 differ.
  std::ostringstream temperature;
  temperature.precision(17);
  temperature << request.temperature;
  const Value v{{"model", request.model_name}, {"prompt", request.prompt}, {"temperature", temperature.str()}};
  return sha256_hex(canonical_serialize(v));
}

std::optional<std::string> ReplayCache::lookup(const CompletionRequest& request) const {
  std::lock_guard<std::mutex> lock(mutex_);
  std::ifstream in(dir_ / (key(request) + ".json"), std::ios::binary);
  if (!in) return std::nullopt;
  std::stringstream buffer;
  buffer << in.rdbuf();
  try {
    const Value v = parse_value(buffer.str());
    // Guard against hash collisions: the stored triple must match exactly.
    if (v.at("prompt") != request.prompt || v.at("model") != request.model_name) return std::nullopt;
    return v.at("response").get<std::string>();
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

void ReplayCache::store(const CompletionRequest& request, const std::string& response) {
  std::lock_guard<std::mutex> lock(mutex_);
  const Value v{{"model", request.model_name},
                {"prompt", request.prompt},
                {"temperature", request.temperature},
                {"response", response}};
  const auto final_path = dir_ / (key(request) + ".json");
  const auto tmp_path = dir_ / (key(request) + ".json.tmp");
  {
    std::ofstream out(tmp_path, std::ios::binary | std::ios::trunc);
    out << canonical_serialize(v) << "\n";
    if (!out) throw LlmError("failed to write cache entry " + tmp_path.string());
  }
  std::filesystem::rename(tmp_path, final_path);
}

CacheMode cache_mode_from_string(const std::string& text) {
  if (text == "live") return CacheMode::kLive;
  if (text == "replay") return CacheMode::kReplay;
  if (text == "cached") return CacheMode::kCached;
  throw ParseError("unknown cache mode '" + text + "' (expected live, replay or cached)");
}

CachingClient::CachingClient(std::shared_ptr<LlmClient> inner, std::shared_ptr<ReplayCache> cache, CacheMode mode)
    : inner_(std::move(inner)), cache_(std::move(cache)), mode_(mode) {
  if (!cache_) throw LlmError("caching client needs a cache");
  if (mode_ != CacheMode::kReplay && !inner_) throw LlmUnavailable("no completion service configured");
}

std::string CachingClient::complete(const CompletionRequest& request) {
  if (mode_ != CacheMode::kLive) {
    if (auto hit = cache_->lookup(request)) return *hit;
    if (mode_ == CacheMode::kReplay) {
      throw CacheMiss("no cached completion for key " + ReplayCache::key(request) + " in " + cache_->dir().string());
    }
  }
  std::string response = inner_->complete(request);
  cache_->store(request, response);
  return response;
}

}  // namespace cwm::llm
