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
#include <span>
#include <unordered_set>
#include <vector>

#include "vexbench/embedding.hpp"
#include "vexbench/kernels.hpp"
#include "vexbench/page_allocator.hpp"

namespace vexbench {

struct SearchHit {
  DocId id;
  double score;

  friend bool operator==(const SearchHit&, const SearchHit&) = default;
};

/// Canonical result order: descending score, ascending id on equal scores.
inline bool ranks_before(const SearchHit& a, const SearchHit& b) noexcept {
  return a.score > b.score || (a.score == b.score && a.id < b.id);
}

struct ResultList {
  std::vector<SearchHit> hits;
  std::size_t k_requested = 0;

  std::vector<DocId> ids() const;

  friend bool operator==(const ResultList&, const ResultList&) = default;
};

struct Document {
  DocId id;
  Embedding embedding;
};

/// Exact cosine index over a contiguous float32 corpus. Vectors are appended
/// until seal(); afterwards the index is immutable and safe to query from
/// any number of threads.
class FlatIndex {
 public:
  explicit FlatIndex(std::size_t dim,
                     const kernels::KernelSet& kernels = kernels::active());

  /// Rejects duplicate ids, wrong dimension, zero-norm vectors and any
  /// mutation after seal().
  void add(DocId id, const Embedding& v);
  void add(std::span<const Document> docs);

  /// Freezes the corpus and publishes one cached norm per vector.
  void seal() noexcept;

  bool sealed() const noexcept { return sealed_; }
  std::size_t size() const noexcept { return ids_.size(); }
  std::size_t dim() const noexcept { return dim_; }
  const kernels::KernelSet& kernels() const noexcept { return *kernels_; }

  std::span<const DocId> ids() const noexcept { return ids_; }
  bool contains(DocId id) const { return id_set_.contains(id); }
  std::span<const float> vector(std::size_t row) const noexcept {
    return {storage_.data() + row * dim_, dim_};
  }
  /// Empty until sealed.
  std::span<const double> cached_norms() const noexcept;

  /// Exact top-k using a k-bounded selection heap. k larger than the corpus
  /// is clamped.
  ResultList search_topk(const Embedding& query, std::size_t k) const;

  /// All hits, fully sorted in canonical order.
  ResultList brute_force_all(const Embedding& query) const;

 private:
  double checked_query_norm(const Embedding& query) const;

  std::size_t dim_;
  const kernels::KernelSet* kernels_;
  std::vector<float, PageAllocator<float>> storage_;
  std::vector<DocId> ids_;
  std::vector<double> norms_;
  std::unordered_set<DocId> id_set_;
  bool sealed_ = false;
};

/// Naive exhaustive ranking: evaluates the full cosine formula for every
/// document (both norms recomputed per pair, nothing cached) and sorts the
/// complete result list. Defaults to the scalar reference kernel.
ResultList brute_force_scan(std::span<const Document> corpus, const Embedding& query,
                            const kernels::KernelSet& kernels = kernels::scalar());

}  // namespace vexbench
