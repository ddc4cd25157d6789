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

#include <cstddef>
#include <string>
#include <string_view>

#include "vexbench/backend.hpp"

namespace vexbench {

/// Wire scores are cosine + kWireScoreShift so that the service only ever
/// reports non-negative scores.
inline constexpr double kWireScoreShift = 1.0;

struct Endpoint {
  std::string host;
  int port = 0;

  /// "http://host:port", "host:port" or "http://host" (port 80).
  static Endpoint parse(std::string_view url);
  std::string to_string() const;
};

/// Client for the search-service wire protocol:
///   PUT  /index/{name}          {"dim": d}
///   POST /index/{name}/bulk     {"docs": [{"id": i, "embedding": [...]}, ...]}
///   POST /index/{name}/search   {"embedding": [...], "k": k}
class RemoteBackend final : public SearchBackend {
 public:
  /// An empty index name picks a process-unique one.
  explicit RemoteBackend(Endpoint endpoint, std::string index_name = {},
                         std::size_t bulk_batch = 1000);

  BackendKind kind() const noexcept override { return BackendKind::kRemote; }
  void index(std::span<const Document> docs) override;
  ResultList query(const Embedding& q, std::size_t k) const override;
  std::size_t size() const override { return size_; }

  const std::string& index_name() const noexcept { return index_name_; }
  const Endpoint& endpoint() const noexcept { return endpoint_; }

 private:
  Endpoint endpoint_;
  std::string index_name_;
  std::size_t bulk_batch_;
  std::size_t size_ = 0;
  bool indexed_ = false;
};

}  // namespace vexbench
