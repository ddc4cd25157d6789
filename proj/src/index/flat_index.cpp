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
#include "vexbench/flat_index.hpp"

#include <algorithm>
#include <string>

#include "vexbench/error.hpp"

namespace vexbench {
namespace {

// Heap ordered so that the worst retained hit sits at the front.
struct WorseFirst {
  bool operator()(const SearchHit& a, const SearchHit& b) const noexcept {
    return ranks_before(a, b);
  }
};

void require_k(std::size_t k) {
  if (k == 0) throw Error(ErrorCode::kInvalidArgument, "k must be at least 1");
}

}  // namespace

std::vector<DocId> ResultList::ids() const {
  std::vector<DocId> out;
  out.reserve(hits.size());
  for (const auto& h : hits) out.push_back(h.id);
  return out;
}

FlatIndex::FlatIndex(std::size_t dim, const kernels::KernelSet& kernels)
    : dim_(dim), kernels_(&kernels) {
  if (dim == 0) throw Error(ErrorCode::kInvalidArgument, "index dimension must be at least 1");
}

void FlatIndex::add(DocId id, const Embedding& v) {
  if (sealed_) throw Error(ErrorCode::kIndexSealed, "cannot add to a sealed index");
  require_same_dim(dim_, v.dim());
  if (id_set_.contains(id)) {
    throw Error(ErrorCode::kDuplicateId, "duplicate document id " + std::to_string(id));
  }
  // The norm is needed now to reject zero vectors; seal() publishes it.
  const double n = norm(v.values(), *kernels_);
  if (n == 0.0) {
    throw Error(ErrorCode::kZeroNorm, "document " + std::to_string(id) + " has zero norm");
  }
  id_set_.insert(id);
  ids_.push_back(id);
  norms_.push_back(n);
  storage_.insert(storage_.end(), v.values().begin(), v.values().end());
}

void FlatIndex::add(std::span<const Document> docs) {
  storage_.reserve(storage_.size() + docs.size() * dim_);
  ids_.reserve(ids_.size() + docs.size());
  norms_.reserve(norms_.size() + docs.size());
  for (const auto& d : docs) add(d.id, d.embedding);
}

void FlatIndex::seal() noexcept { sealed_ = true; }

std::span<const double> FlatIndex::cached_norms() const noexcept {
  if (!sealed_) return {};
  return norms_;
}

double FlatIndex::checked_query_norm(const Embedding& query) const {
  if (!sealed_) throw Error(ErrorCode::kIndexNotSealed, "index must be sealed before searching");
  require_same_dim(dim_, query.dim());
  const double qn = norm(query.values(), *kernels_);
  if (qn == 0.0) throw Error(ErrorCode::kZeroNorm, "query has zero norm");
  return qn;
}

ResultList FlatIndex::search_topk(const Embedding& query, std::size_t k) const {
  require_k(k);
  const double qn = checked_query_norm(query);
  const std::size_t keep = std::min(k, size());

  ResultList out;
  out.k_requested = k;
  if (keep == 0) return out;

  std::vector<SearchHit>& heap = out.hits;
  heap.reserve(keep);
  const WorseFirst cmp;
  for (std::size_t row = 0; row < size(); ++row) {
    const SearchHit hit{ids_[row],
                        cosine_prenormed(query.values(), qn, vector(row), norms_[row], *kernels_)};
    if (heap.size() < keep) {
      heap.push_back(hit);
      std::push_heap(heap.begin(), heap.end(), cmp);
    } else if (ranks_before(hit, heap.front())) {
      std::pop_heap(heap.begin(), heap.end(), cmp);
      heap.back() = hit;
      std::push_heap(heap.begin(), heap.end(), cmp);
    }
  }
  std::sort_heap(heap.begin(), heap.end(), cmp);
  return out;
}

ResultList FlatIndex::brute_force_all(const Embedding& query) const {
  const double qn = checked_query_norm(query);
  ResultList out;
  out.k_requested = size();
  out.hits.reserve(size());
  for (std::size_t row = 0; row < size(); ++row) {
    out.hits.push_back(
        {ids_[row], cosine_prenormed(query.values(), qn, vector(row), norms_[row], *kernels_)});
  }
  std::sort(out.hits.begin(), out.hits.end(), ranks_before);
  return out;
}

ResultList brute_force_scan(std::span<const Document> corpus, const Embedding& query,
                            const kernels::KernelSet& kernels) {
  ResultList out;
  out.k_requested = corpus.size();
  out.hits.reserve(corpus.size());
  for (const auto& doc : corpus) {
    out.hits.push_back({doc.id, cosine(query.values(), doc.embedding.values(), kernels)});
  }
  std::sort(out.hits.begin(), out.hits.end(), ranks_before);
  return out;
}

}  // namespace vexbench
