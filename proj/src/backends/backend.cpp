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
#include "vexbench/backend.hpp"

#include <string>
#include <unordered_set>

#include "vexbench/error.hpp"
#include "vexbench/remote.hpp"

namespace vexbench {
namespace {

void require_unindexed(bool indexed) {
  if (indexed) throw Error(ErrorCode::kIndexSealed, "backend has already been indexed");
}

void require_indexed(bool indexed) {
  if (!indexed) throw Error(ErrorCode::kIndexNotSealed, "backend has not been indexed");
}

}  // namespace

std::string_view to_string(BackendKind kind) noexcept {
  switch (kind) {
    case BackendKind::kFlat: return "flat";
    case BackendKind::kNaive: return "naive";
    case BackendKind::kRemote: return "remote";
  }
  return "unknown";
}

BackendKind parse_backend_kind(std::string_view name) {
  if (name == "flat") return BackendKind::kFlat;
  if (name == "naive") return BackendKind::kNaive;
  if (name == "remote") return BackendKind::kRemote;
  throw Error(ErrorCode::kInvalidArgument, "unknown backend '" + std::string(name) + "'");
}

void FlatBackend::index(std::span<const Document> docs) {
  require_unindexed(index_.has_value());
  FlatIndex idx(docs.empty() ? 1 : docs.front().embedding.dim(), *kernels_);
  idx.add(docs);
  idx.seal();
  index_ = std::move(idx);
}

ResultList FlatBackend::query(const Embedding& q, std::size_t k) const {
  require_indexed(index_.has_value());
  if (index_->size() == 0) return ResultList{{}, k};
  return index_->search_topk(q, k);
}

void NaiveBackend::index(std::span<const Document> docs) {
  require_unindexed(indexed_);
  std::unordered_set<DocId> seen;
  for (const auto& d : docs) {
    require_same_dim(docs.front().embedding.dim(), d.embedding.dim());
    if (!seen.insert(d.id).second) {
      throw Error(ErrorCode::kDuplicateId, "duplicate document id " + std::to_string(d.id));
    }
  }
  docs_.assign(docs.begin(), docs.end());
  indexed_ = true;
}

ResultList NaiveBackend::query(const Embedding& q, std::size_t k) const {
  require_indexed(indexed_);
  if (k == 0) throw Error(ErrorCode::kInvalidArgument, "k must be at least 1");
  ResultList all = brute_force_scan(docs_, q);
  if (all.hits.size() > k) all.hits.resize(k);
  all.k_requested = k;
  return all;
}

double timed_index(SearchBackend& backend, std::span<const Document> docs, Clock& clock) {
  if (backend.kind() == BackendKind::kNaive) {
    backend.index(docs);
    return 0.0;
  }
  const double start = clock.now();
  backend.index(docs);
  return clock.now() - start;
}

TimedResult timed_query(const SearchBackend& backend, const Embedding& q, std::size_t k,
                        Clock& clock) {
  TimedResult out;
  const double start = clock.now();
  out.results = backend.query(q, k);
  out.query_duration = clock.now() - start;
  return out;
}

std::unique_ptr<SearchBackend> make_backend(BackendKind kind, const BackendOptions& options) {
  switch (kind) {
    case BackendKind::kFlat: return std::make_unique<FlatBackend>();
    case BackendKind::kNaive: return std::make_unique<NaiveBackend>();
    case BackendKind::kRemote:
      if (options.remote_url.empty()) {
        throw Error(ErrorCode::kInvalidArgument, "remote backend needs a service URL");
      }
      return std::make_unique<RemoteBackend>(Endpoint::parse(options.remote_url));
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown backend kind");
}

}  // namespace vexbench
