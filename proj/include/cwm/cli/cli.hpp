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

#ifndef CWM_CLI_CLI_HPP_
#define CWM_CLI_CLI_HPP_

#include <iosfwd>
#include <string>
#include <vector>

namespace cwm::cli {

// Exit statuses.
inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
// The pipeline finished but flagged a degradation (budget exhausted, test
// suite not fully passed, LLM failure mid-run).
inline constexpr int kExitDegraded = 2;

// Runs the `cwm` command line. `in` feeds interactive play.
int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err);

}  // namespace cwm::cli

#endif  // CWM_CLI_CLI_HPP_
