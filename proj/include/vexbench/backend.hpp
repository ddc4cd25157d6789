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
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "vexbench/clock.hpp"
#include "vexbench/flat_index.hpp"

namespace vexbench {

enum class BackendKind { kFlat, kNaive, kRemote };

std::string_view to_string(BackendKind kind) noexcept;
/// Accepts "flat", "naive" and "remote".
BackendKind parse_backend_kind(std::string_view name);

struct BackendTimings {
  double index_duration = 0.0;
  double query_duration = 0.0;
};

/// Uniform contract over the three search approaches. index() is called
/// once per instance, by a single writer. query() is const and may run
/// concurrently once indexing has finished.
class SearchBackend {
 public:
  virtual ~SearchBackend() = default;

  virtual BackendKind kind() const noexcept = 0;
  virtual void index(std::span<const Document> docs) = 0;
  virtual ResultList query(const Embedding& q, std::size_t k) const = 0;
  virtual std::size_t size() const = 0;
};

/// Exact flat index with k-bounded selection.
class FlatBackend final : public SearchBackend {
 public:
  explicit FlatBackend(const kernels::KernelSet& ks = kernels::active()) : kernels_(&ks) {}

  BackendKind kind() const noexcept override { return BackendKind::kFlat; }
  void index(std::span<const Document> docs) override;
  ResultList query(const Embedding& q, std::size_t k) const override;
  std::size_t size() const override { return index_ ? index_->size() : 0; }

 private:
  const kernels::KernelSet* kernels_;
  std::optional<FlatIndex> index_;
};

/// Buffers documents untouched; every query scores the whole corpus from
/// scratch with the scalar reference kernel and fully sorts it.
class NaiveBackend final : public SearchBackend {
 public:
  BackendKind kind() const noexcept override { return BackendKind::kNaive; }
  void index(std::span<const Document> docs) override;
  ResultList query(const Embedding& q, std::size_t k) const override;
  std::size_t size() const override { return docs_.size(); }

 private:
  std::vector<Document> docs_;
  bool indexed_ = false;
};

/// Times the whole ingest. The naive backend reports 0 without reading the
/// clock since it does no indexing work.
double timed_index(SearchBackend& backend, std::span<const Document> docs, Clock& clock);

struct TimedResult {
  ResultList results;
  double query_duration = 0.0;
};

TimedResult timed_query(const SearchBackend& backend, const Embedding& q, std::size_t k,
                        Clock& clock);

struct BackendOptions {
  /// Base URL of the search service, e.g. "http://127.0.0.1:9200".
  std::string remote_url;
};

std::unique_ptr<SearchBackend> make_backend(BackendKind kind, const BackendOptions& options = {});

}  // namespace vexbench
