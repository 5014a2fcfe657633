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

#include "cwm/core/value.hpp"

#include <charconv>
#include <cmath>
#include <cstdint>

#include "cwm/core/errors.hpp"

namespace cwm {
namespace {

constexpr double kMaxExactInteger = 9007199254740992.0;  // 2^53

void append_string(const std::string& s, std::string& out) {
  out += Value(s).dump(-1, ' ', false, Value::error_handler_t::replace);
}

void append_double(double d, std::string& out) {
  if (!std::isfinite(d)) {
    throw UnsupportedValue("non-finite numbers are not part of the value model");
  }
  if (std::nearbyint(d) == d && std::fabs(d) < kMaxExactInteger) {
    out += std::to_string(static_cast<std::int64_t>(d));
    return;
  }
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), d);
  out.append(buf, end);
}

int kind_rank(const Value& v) {
  switch (v.type()) {
    case Value::value_t::null: return 0;
    case Value::value_t::boolean: return 1;
    case Value::value_t::number_integer:
    case Value::value_t::number_unsigned:
    case Value::value_t::number_float: return 2;
    case Value::value_t::string: return 3;
    case Value::value_t::array: return 4;
    case Value::value_t::object: return 5;
    default: return 6;
  }
}

bool numbers_equal(const Value& a, const Value& b) {
  if (a.is_number_float() || b.is_number_float()) {
    return a.get<double>() == b.get<double>();
  }
  if (a.is_number_unsigned() && b.is_number_unsigned()) {
    return a.get<std::uint64_t>() == b.get<std::uint64_t>();
  }
  if (a.is_number_unsigned()) {
    auto u = a.get<std::uint64_t>();
    auto i = b.get<std::int64_t>();
    return i >= 0 && static_cast<std::uint64_t>(i) == u;
  }
  if (b.is_number_unsigned()) return numbers_equal(b, a);
  return a.get<std::int64_t>() == b.get<std::int64_t>();
}

void append_python_string(const std::string& s, std::string& out) {
  out += '\'';
  for (char c : s) {
    switch (c) {
      case '\\': out += "\\\\"; break;
      case '\'': out += "\\'"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default: out += c;
    }
  }
  out += '\'';
}

void python_repr_into(const Value& v, std::string& out) {
  switch (v.type()) {
    case Value::value_t::null: out += "None"; return;
    case Value::value_t::boolean: out += v.get<bool>() ? "True" : "False"; return;
    case Value::value_t::number_integer:
    case Value::value_t::number_unsigned: out += v.dump(); return;
    case Value::value_t::number_float: {
      double d = v.get<double>();
      if (std::nearbyint(d) == d && std::fabs(d) < kMaxExactInteger) {
        out += std::to_string(static_cast<std::int64_t>(d));
        out += ".0";
      } else {
        append_double(d, out);
      }
      return;
    }
    case Value::value_t::string: append_python_string(v.get<std::string>(), out); return;
    case Value::value_t::array: {
      out += '[';
      bool first = true;
      for (const auto& e : v) {
        if (!first) out += ", ";
        first = false;
        python_repr_into(e, out);
      }
      out += ']';
      return;
    }
    case Value::value_t::object: {
      out += '{';
      bool first = true;
      for (auto it = v.begin(); it != v.end(); ++it) {
        if (!first) out += ", ";
        first = false;
        append_python_string(it.key(), out);
        out += ": ";
        python_repr_into(it.value(), out);
      }
      out += '}';
      return;
    }
    default: throw UnsupportedValue("binary values are not part of the value model");
  }
}

}  // namespace

void canonical_serialize(const Value& v, std::string& out) {
  switch (v.type()) {
    case Value::value_t::null: out += "null"; return;
    case Value::value_t::boolean: out += v.get<bool>() ? "true" : "false"; return;
    case Value::value_t::number_integer:
    case Value::value_t::number_unsigned: out += v.dump(); return;
    case Value::value_t::number_float: append_double(v.get<double>(), out); return;
    case Value::value_t::string: append_string(v.get_ref<const std::string&>(), out); return;
    case Value::value_t::array: {
      out += '[';
      bool first = true;
      for (const auto& e : v) {
        if (!first) out += ',';
        first = false;
        canonical_serialize(e, out);
      }
      out += ']';
      return;
    }
    case Value::value_t::object: {
      // nlohmann::json stores objects in a std::map, so iteration is already
      // sorted by key bytes.
      out += '{';
      bool first = true;
      for (auto it = v.begin(); it != v.end(); ++it) {
        if (!first) out += ',';
        first = false;
        append_string(it.key(), out);
        out += ':';
        canonical_serialize(it.value(), out);
      }
      out += '}';
      return;
    }
    default: throw UnsupportedValue("binary or discarded values are not part of the value model");
  }
}

std::string canonical_serialize(const Value& value) {
  std::string out;
  canonical_serialize(value, out);
  return out;
}

Value parse_value(std::string_view text) {
  try {
    return Value::parse(text.begin(), text.end());
  } catch (const Value::parse_error& e) {
    throw ParseError(std::string("malformed value text: ") + e.what());
  }
}

bool structurally_equal(const Value& a, const Value& b) {
  if (kind_rank(a) != kind_rank(b)) return false;
  switch (kind_rank(a)) {
    case 0: return true;
    case 1: return a.get<bool>() == b.get<bool>();
    case 2: return numbers_equal(a, b);
    case 3: return a.get_ref<const std::string&>() == b.get_ref<const std::string&>();
    case 4: {
      if (a.size() != b.size()) return false;
      for (std::size_t i = 0; i < a.size(); ++i) {
        if (!structurally_equal(a[i], b[i])) return false;
      }
      return true;
    }
    case 5: {
      if (a.size() != b.size()) return false;
      auto ia = a.begin();
      auto ib = b.begin();
      for (; ia != a.end(); ++ia, ++ib) {
        if (ia.key() != ib.key() || !structurally_equal(ia.value(), ib.value())) {
          return false;
        }
      }
      return true;
    }
    default: return false;
  }
}

std::string python_repr(const Value& value) {
  std::string out;
  python_repr_into(value, out);
  return out;
}

}  // namespace cwm
