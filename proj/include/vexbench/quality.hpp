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
#include <string>
#include <vector>

#include "vexbench/backend.hpp"
#include "vexbench/benchmark.hpp"
#include "vexbench/dataset.hpp"

namespace vexbench {

/// Number of ranked positions i < min(k, shortest list) at which the lists
/// do not all carry the same id. Throws kArity for fewer than two lists.
std::size_t positional_agreement(std::span<const ResultList> lists, std::size_t k);

/// Largest |score difference| against the first list over positions where
/// all lists agree on the id.
double max_score_deviation(std::span<const ResultList> lists, std::size_t k);

struct AgreementReport {
  std::size_t dataset_size = 0;
  std::size_t k = 0;
  std::size_t runs = 0;
  std::vector<std::size_t> errors_per_run;
  double avg_errors = 0.0;
  double max_score_deviation = 0.0;
  /// Set when a backend failed at this size.
  std::string error;

  bool failed() const noexcept { return !error.empty(); }
};

/// For every size: `runs` times, builds fresh backends over the first
/// `size` documents, issues `query` and counts positional disagreements.
std::vector<AgreementReport> run_agreement(std::span<const std::size_t> sizes,
                                           std::span<const Document> corpus, const Embedding& query,
                                           std::span<const BackendKind> backends,
                                           const BackendFactory& factory, std::size_t k = 100,
                                           std::size_t runs = 2);

struct RecallReport {
  std::size_t num_queries = 0;
  std::vector<std::size_t> k_values;
  std::vector<std::size_t> hits_at_k;
};

/// Indexes the document embeddings of the first n records (keyed by
/// example_id) and, for each of the first m records, checks whether its own
/// document is among the top-k hits for its question embedding.
RecallReport recall_expected(std::span<const EnrichedRecord> records, std::size_t n, std::size_t m,
                             std::span<const std::size_t> k_values, SearchBackend& backend);

/// Same, on a fresh flat backend.
RecallReport recall_expected(std::span<const EnrichedRecord> records, std::size_t n, std::size_t m,
                             std::span<const std::size_t> k_values);

std::string agreement_csv(std::span<const AgreementReport> reports);
std::string agreement_table(std::span<const AgreementReport> reports);
std::string recall_csv(const RecallReport& report);
std::string recall_table(const RecallReport& report);

}  // namespace vexbench
