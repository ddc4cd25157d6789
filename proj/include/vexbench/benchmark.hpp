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
#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "vexbench/backend.hpp"
#include "vexbench/clock.hpp"

namespace vexbench {

enum class Phase { kIndex, kQuery };

std::string_view to_string(Phase phase) noexcept;

struct BenchPlan {
  std::vector<std::size_t> sizes{1000, 5000, 10000, 20000, 40000, 80000};
  std::vector<BackendKind> backends{BackendKind::kFlat, BackendKind::kNaive};
  std::size_t k = 100;
  std::size_t repetitions = 3;
  std::uint64_t seed = 0;

  /// sizes nonempty and strictly ascending, repetitions >= 1, k >= 1.
  void validate() const;
};

struct BenchSample {
  BackendKind backend;
  Phase phase;
  std::size_t size;
  std::size_t repetition;
  /// Empty for a failed cell.
  std::optional<double> duration_s;
  std::string error;
};

struct SummaryRow {
  BackendKind backend;
  Phase phase;
  std::size_t size;
  std::optional<double> mean_s;
};

struct BenchResult {
  std::vector<BenchSample> samples;
  std::vector<SummaryRow> summary;

  /// nullopt if the row is absent or failed.
  std::optional<double> mean(BackendKind backend, Phase phase, std::size_t size) const;
};

using BackendFactory = std::function<std::unique_ptr<SearchBackend>(BackendKind)>;

/// For every (backend, size) cell and every repetition: builds a fresh
/// backend, times indexing of the first `size` documents and then one
/// top-k query. Naive backends get no index-phase samples. A throwing cell
/// is recorded as failed and the remaining cells still run.
BenchResult run_bench(const BenchPlan& plan, std::span<const Document> corpus, const Embedding& query,
                      const BackendFactory& factory, Clock& clock);

/// Arithmetic mean per (backend, phase, size); a cell with any failed
/// sample has no mean.
std::vector<SummaryRow> summarize(std::span<const BenchSample> samples);

std::string raw_csv(std::span<const BenchSample> samples);
std::string summary_csv(std::span<const SummaryRow> summary);

struct CsvPaths {
  std::filesystem::path raw;
  std::filesystem::path summary;
};

/// Writes <prefix>_raw.csv and <prefix>_summary.csv.
CsvPaths emit_csv(const BenchResult& result, const std::string& prefix);

}  // namespace vexbench
