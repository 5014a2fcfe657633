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

#ifndef CWM_CORE_VALUE_HPP_
#define CWM_CORE_VALUE_HPP_

#include <string>
#include <string_view>

#include "json.hpp"

namespace cwm {

// Structured value tree: null, boolean, number, string, sequence, map with
// string keys. States and observations of every world model use this model.
using Value = nlohmann::json;

// Deterministic text encoding. Map keys are sorted, integral numbers are
// rendered without a fraction, non-integral numbers use the shortest
// round-trip form, and no insignificant whitespace is emitted.
// Throws UnsupportedValue for NaN or infinite numbers.
std::string canonical_serialize(const Value& value);
void canonical_serialize(const Value& value, std::string& out);

// Parses text produced by canonical_serialize (any JSON is accepted).
// Throws ParseError.
Value parse_value(std::string_view text);

// Equality over the value model: map key order is irrelevant and integers
// compare equal to integral floats.
bool structurally_equal(const Value& a, const Value& b);

// Convenience for Python-flavoured rendering used in prompts and test
// listings (None/True/False, single-quoted strings).
std::string python_repr(const Value& value);

}  // namespace cwm

#endif  // CWM_CORE_VALUE_HPP_
