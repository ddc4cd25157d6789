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
#include "vexbench/quality.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "vexbench/error.hpp"

namespace vexbench {
namespace {

std::size_t common_length(std::span<const ResultList> lists, std::size_t k) {
  if (lists.size() < 2) {
    throw Error(ErrorCode::kArity, "agreement needs at least two result lists, got " +
                                       std::to_string(lists.size()));
  }
  std::size_t len = k;
  for (const auto& l : lists) len = std::min(len, l.hits.size());
  return len;
}

std::string fixed(double v, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  return buf;
}

}  // namespace

std::size_t positional_agreement(std::span<const ResultList> lists, std::size_t k) {
  const std::size_t len = common_length(lists, k);
  std::size_t errors = 0;
  for (std::size_t i = 0; i < len; ++i) {
    const DocId first = lists.front().hits[i].id;
    const bool all_equal = std::all_of(lists.begin() + 1, lists.end(),
                                       [&](const ResultList& l) { return l.hits[i].id == first; });
    if (!all_equal) ++errors;
  }
  return errors;
}

double max_score_deviation(std::span<const ResultList> lists, std::size_t k) {
  const std::size_t len = common_length(lists, k);
  double worst = 0.0;
  for (std::size_t i = 0; i < len; ++i) {
    const SearchHit& ref = lists.front().hits[i];
    const bool all_equal = std::all_of(lists.begin() + 1, lists.end(),
                                       [&](const ResultList& l) { return l.hits[i].id == ref.id; });
    if (!all_equal) continue;
    for (const auto& l : lists) worst = std::max(worst, std::abs(l.hits[i].score - ref.score));
  }
  return worst;
}

std::vector<AgreementReport> run_agreement(std::span<const std::size_t> sizes,
                                           std::span<const Document> corpus, const Embedding& query,
                                           std::span<const BackendKind> backends,
                                           const BackendFactory& factory, std::size_t k,
                                           std::size_t runs) {
  if (backends.size() < 2) {
    throw Error(ErrorCode::kArity, "agreement needs at least two backends, got " +
                                       std::to_string(backends.size()));
  }
  if (runs == 0) throw Error(ErrorCode::kInvalidArgument, "runs must be at least 1");
  if (k == 0) throw Error(ErrorCode::kInvalidArgument, "k must be at least 1");

  std::vector<AgreementReport> reports;
  for (const std::size_t size : sizes) {
    AgreementReport report;
    report.dataset_size = size;
    report.k = k;
    report.runs = runs;
    try {
      if (size > corpus.size()) {
        throw Error(ErrorCode::kInvalidArgument, "corpus holds only " + std::to_string(corpus.size()) +
                                                     " documents");
      }
      const auto docs = corpus.first(size);
      for (std::size_t run = 0; run < runs; ++run) {
        std::vector<ResultList> lists;
        for (const BackendKind kind : backends) {
          std::unique_ptr<SearchBackend> backend = factory(kind);
          backend->index(docs);
          lists.push_back(backend->query(query, k));
        }
        report.errors_per_run.push_back(positional_agreement(lists, k));
        report.max_score_deviation =
            std::max(report.max_score_deviation, max_score_deviation(lists, k));
      }
      double sum = 0.0;
      for (std::size_t e : report.errors_per_run) sum += static_cast<double>(e);
      report.avg_errors = sum / static_cast<double>(report.errors_per_run.size());
    } catch (const std::exception& e) {
      report.error = e.what();
    }
    reports.push_back(std::move(report));
  }
  return reports;
}

RecallReport recall_expected(std::span<const EnrichedRecord> records, std::size_t n, std::size_t m,
                             std::span<const std::size_t> k_values, SearchBackend& backend) {
  if (m > n) {
    throw Error(ErrorCode::kInvalidArgument, "recall needs m <= n (m=" + std::to_string(m) +
                                                 ", n=" + std::to_string(n) + ")");
  }
  if (n > records.size()) {
    throw Error(ErrorCode::kInvalidArgument, "recall needs " + std::to_string(n) + " records, have " +
                                                 std::to_string(records.size()));
  }
  if (k_values.empty()) throw Error(ErrorCode::kInvalidArgument, "recall needs at least one k");
  for (std::size_t i = 0; i < k_values.size(); ++i) {
    if (k_values[i] == 0 || (i > 0 && k_values[i] <= k_values[i - 1])) {
      throw Error(ErrorCode::kInvalidArgument, "k values must be positive and strictly ascending");
    }
  }

  backend.index(documents_of(records, n));

  RecallReport report;
  report.num_queries = m;
  report.k_values.assign(k_values.begin(), k_values.end());
  report.hits_at_k.assign(k_values.size(), 0);
  const std::size_t max_k = k_values.back();
  for (std::size_t j = 0; j < m; ++j) {
    const ResultList top = backend.query(records[j].question_embeddings, max_k);
    const auto it = std::find_if(top.hits.begin(), top.hits.end(),
                                 [&](const SearchHit& h) { return h.id == records[j].example_id; });
    if (it == top.hits.end()) continue;
    const auto rank = static_cast<std::size_t>(it - top.hits.begin());
    for (std::size_t i = 0; i < k_values.size(); ++i) {
      if (rank < k_values[i]) ++report.hits_at_k[i];
    }
  }
  return report;
}

RecallReport recall_expected(std::span<const EnrichedRecord> records, std::size_t n, std::size_t m,
                             std::span<const std::size_t> k_values) {
  FlatBackend backend;
  return recall_expected(records, n, m, k_values, backend);
}

std::string agreement_csv(std::span<const AgreementReport> reports) {
  std::string out = "size,k,runs,avg_errors,max_score_deviation,status\n";
  for (const auto& r : reports) {
    out += std::to_string(r.dataset_size) + "," + std::to_string(r.k) + "," + std::to_string(r.runs) +
           "," + (r.failed() ? "" : fixed(r.avg_errors, 2)) + "," +
           (r.failed() ? "" : fixed(r.max_score_deviation, 12)) + "," + (r.failed() ? "failed" : "ok") +
           "\n";
  }
  return out;
}

std::string agreement_table(std::span<const AgreementReport> reports) {
  std::string out = "Dataset size | Avg. errors | Max score deviation\n";
  out += "-------------+-------------+--------------------\n";
  for (const auto& r : reports) {
    char line[160];
    if (r.failed()) {
      std::snprintf(line, sizeof line, "%12zu | failed: %s\n", r.dataset_size, r.error.c_str());
    } else {
      std::snprintf(line, sizeof line, "%12zu | %11.2f | %19.3e\n", r.dataset_size, r.avg_errors,
                    r.max_score_deviation);
    }
    out += line;
  }
  return out;
}

std::string recall_csv(const RecallReport& report) {
  std::string out = "k,hits,num_queries\n";
  for (std::size_t i = 0; i < report.k_values.size(); ++i) {
    out += std::to_string(report.k_values[i]) + "," + std::to_string(report.hits_at_k[i]) + "," +
           std::to_string(report.num_queries) + "\n";
  }
  return out;
}

std::string recall_table(const RecallReport& report) {
  std::string out = " Top-k | Expected results in top-k\n";
  out += "-------+--------------------------\n";
  for (std::size_t i = 0; i < report.k_values.size(); ++i) {
    char line[96];
    std::snprintf(line, sizeof line, "%6zu | %zu of %zu\n", report.k_values[i], report.hits_at_k[i],
                  report.num_queries);
    out += line;
  }
  return out;
}

}  // namespace vexbench
