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

#include "cwm/host/host.hpp"

namespace cwm::host {

std::string encode_request(std::int64_t id, const std::string& op, const Value& args) {
  return canonical_serialize(Value{{"id", id}, {"op", op}, {"args", args.is_null() ? Value::object() : args}});
}

Reply decode_reply(const std::string& line) {
  Value v;
  try {
    v = parse_value(line);
  } catch (const std::exception& e) {
    throw ProtocolDesync(std::string("malformed reply line: ") + e.what());
  }
  try {
    Reply r;
    r.id = v.at("id").get<std::int64_t>();
    r.ok = v.at("ok").get<bool>();
    if (r.ok) {
      r.value = v.value("value", Value());
    } else {
      const Value& err = v.at("error");
      r.error_type = err.value("type", std::string("Exception"));
      r.error_message = err.value("message", std::string());
      r.error_trace = err.value("trace", std::string());
    }
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw ProtocolDesync(std::string("reply missing fields: ") + e.what());
  }
}

std::string encode_reply(const Reply& reply) {
  Value v{{"id", reply.id}, {"ok", reply.ok}};
  if (reply.ok) {
    v["value"] = reply.value;
  } else {
    v["error"] = Value{{"type", reply.error_type}, {"message", reply.error_message}, {"trace", reply.error_trace}};
  }
  return canonical_serialize(v);
}

}  // namespace cwm::host
