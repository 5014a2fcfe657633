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

#include "cwm/llm/client.hpp"

namespace cwm::llm {

std::string ScriptedMock::complete(const CompletionRequest& request) {
  std::lock_guard<std::mutex> lock(mutex_);
  const int index = calls_.fetch_add(1);
  prompts_.push_back(request.prompt);
  if (index >= static_cast<int>(script_.size())) {
    throw ScriptExhausted("scripted client has no response for call " + std::to_string(index + 1) + " (script length " +
                          std::to_string(script_.size()) + ")");
  }
  return script_[static_cast<std::size_t>(index)];
}

std::string FunctionMock::complete(const CompletionRequest& request) {
  return responder_(calls_.fetch_add(1), request);
}

}  // namespace cwm::llm
