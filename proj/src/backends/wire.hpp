// Copyright 2026-present the vexbench authors
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
#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "vexbench/embedding.hpp"
#include "vexbench/error.hpp"

namespace vexbench::wire {

// Each float is widened to double before serialization; the shortest
// decimal for that double parses back to the identical float.
inline nlohmann::json embedding_to_json(std::span<const float> values) {
  nlohmann::json arr = nlohmann::json::array();
  arr.get_ref<nlohmann::json::array_t&>().reserve(values.size());
  for (float v : values) arr.push_back(static_cast<double>(v));
  return arr;
}

inline Embedding embedding_from_json(const nlohmann::json& j) {
  if (!j.is_array()) throw Error(ErrorCode::kMalformedRecord, "embedding must be an array");
  std::vector<float> values;
  values.reserve(j.size());
  for (const auto& x : j) {
    if (!x.is_number()) {
      throw Error(ErrorCode::kMalformedRecord, "embedding elements must be numbers");
    }
    values.push_back(static_cast<float>(x.get<double>()));
  }
  return Embedding(std::move(values));
}

inline std::string error_body(const std::string& message) {
  return nlohmann::json{{"error", message}}.dump();
}

}  // namespace vexbench::wire
