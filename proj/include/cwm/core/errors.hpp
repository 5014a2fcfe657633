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

#ifndef CWM_CORE_ERRORS_HPP_
#define CWM_CORE_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace cwm {

// Root of every error raised by the framework.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A world model (engine, remote host or synthesized candidate) raised while
// evaluating one of its functions. `trace` carries the fault text that is fed
// back into refinement prompts.
class ModelFault : public Error {
 public:
  explicit ModelFault(const std::string& message, std::string trace = {})
      : Error(message), trace_(std::move(trace)) {}
  const std::string& trace() const { return trace_; }

 private:
  std::string trace_;
};

class IllegalAction : public ModelFault {
 public:
  using ModelFault::ModelFault;
};

class InvalidPlayer : public Error {
 public:
  using Error::Error;
};

class UnsupportedValue : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

class UnknownGame : public Error {
 public:
  using Error::Error;
};

class NotApplicable : public Error {
 public:
  using Error::Error;
};

class BeliefExhausted : public Error {
 public:
  using Error::Error;
};

class NoLegalActions : public Error {
 public:
  using Error::Error;
};

}  // namespace cwm

#endif  // CWM_CORE_ERRORS_HPP_
