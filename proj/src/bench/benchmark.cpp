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
#include "vexbench/benchmark.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <tuple>

#include "vexbench/error.hpp"

namespace vexbench {
namespace {

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

auto sort_key(const BenchSample& s) {
  return std::make_tuple(to_string(s.backend), to_string(s.phase), s.size, s.repetition);
}

auto sort_key(const SummaryRow& r) {
  return std::make_tuple(to_string(r.backend), to_string(r.phase), r.size);
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << content;
  out.flush();
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
}

}  // namespace

std::string_view to_string(Phase phase) noexcept {
  return phase == Phase::kIndex ? "index" : "query";
}

void BenchPlan::validate() const {
  if (sizes.empty()) throw Error(ErrorCode::kInvalidArgument, "benchmark needs at least one size");
  for (std::size_t i = 1; i < sizes.size(); ++i) {
    if (sizes[i] <= sizes[i - 1]) {
      throw Error(ErrorCode::kInvalidArgument, "benchmark sizes must be strictly ascending");
    }
  }
  if (sizes.front() == 0) throw Error(ErrorCode::kInvalidArgument, "benchmark sizes must be positive");
  if (backends.empty()) throw Error(ErrorCode::kInvalidArgument, "benchmark needs at least one backend");
  if (repetitions == 0) throw Error(ErrorCode::kInvalidArgument, "repetitions must be at least 1");
  if (k == 0) throw Error(ErrorCode::kInvalidArgument, "k must be at least 1");
}

std::optional<double> BenchResult::mean(BackendKind backend, Phase phase, std::size_t size) const {
  for (const auto& r : summary) {
    if (r.backend == backend && r.phase == phase && r.size == size) return r.mean_s;
  }
  return std::nullopt;
}

BenchResult run_bench(const BenchPlan& plan, std::span<const Document> corpus, const Embedding& query,
                      const BackendFactory& factory, Clock& clock) {
  plan.validate();
  if (corpus.size() < plan.sizes.back()) {
    throw Error(ErrorCode::kInvalidArgument, "corpus holds " + std::to_string(corpus.size()) +
                                                 " documents, plan needs " +
                                                 std::to_string(plan.sizes.back()));
  }

  BenchResult result;
  for (const BackendKind kind : plan.backends) {
    const bool has_index_phase = kind != BackendKind::kNaive;
    for (const std::size_t size : plan.sizes) {
      const auto docs = corpus.first(size);
      for (std::size_t rep = 0; rep < plan.repetitions; ++rep) {
        Phase phase = Phase::kIndex;
        try {
          std::unique_ptr<SearchBackend> backend = factory(kind);
          const double index_s = timed_index(*backend, docs, clock);
          if (has_index_phase) result.samples.push_back({kind, Phase::kIndex, size, rep, index_s, {}});
          phase = Phase::kQuery;
          const TimedResult q = timed_query(*backend, query, plan.k, clock);
          result.samples.push_back({kind, Phase::kQuery, size, rep, q.query_duration, {}});
        } catch (const std::exception& e) {
          if (phase == Phase::kIndex && has_index_phase) {
            result.samples.push_back({kind, Phase::kIndex, size, rep, std::nullopt, e.what()});
          }
          result.samples.push_back({kind, Phase::kQuery, size, rep, std::nullopt, e.what()});
          break;
        }
      }
    }
  }
  result.summary = summarize(result.samples);
  return result;
}

std::vector<SummaryRow> summarize(std::span<const BenchSample> samples) {
  struct Acc {
    double sum = 0.0;
    std::size_t count = 0;
    bool failed = false;
  };
  std::map<std::tuple<std::string_view, std::string_view, std::size_t>, std::pair<SummaryRow, Acc>> cells;
  for (const auto& s : samples) {
    auto& [row, acc] = cells[std::make_tuple(to_string(s.backend), to_string(s.phase), s.size)];
    row = SummaryRow{s.backend, s.phase, s.size, std::nullopt};
    if (s.duration_s) {
      acc.sum += *s.duration_s;
      ++acc.count;
    } else {
      acc.failed = true;
    }
  }
  std::vector<SummaryRow> out;
  for (auto& [key, cell] : cells) {
    auto& [row, acc] = cell;
    if (!acc.failed && acc.count > 0) row.mean_s = acc.sum / static_cast<double>(acc.count);
    out.push_back(row);
  }
  return out;
}

std::string raw_csv(std::span<const BenchSample> samples) {
  std::vector<const BenchSample*> sorted;
  for (const auto& s : samples) sorted.push_back(&s);
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const BenchSample* a, const BenchSample* b) { return sort_key(*a) < sort_key(*b); });
  std::string out = "backend,phase,size,repetition,duration_s,status\n";
  for (const BenchSample* s : sorted) {
    out += std::string(to_string(s->backend)) + "," + std::string(to_string(s->phase)) + "," +
           std::to_string(s->size) + "," + std::to_string(s->repetition) + "," +
           (s->duration_s ? format_double(*s->duration_s) : "") + "," +
           (s->duration_s ? "ok" : "failed") + "\n";
  }
  return out;
}

std::string summary_csv(std::span<const SummaryRow> summary) {
  std::vector<SummaryRow> sorted(summary.begin(), summary.end());
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const SummaryRow& a, const SummaryRow& b) { return sort_key(a) < sort_key(b); });
  std::string out = "backend,phase,size,mean_s,status\n";
  for (const auto& r : sorted) {
    out += std::string(to_string(r.backend)) + "," + std::string(to_string(r.phase)) + "," +
           std::to_string(r.size) + "," + (r.mean_s ? format_double(*r.mean_s) : "") + "," +
           (r.mean_s ? "ok" : "failed") + "\n";
  }
  return out;
}

CsvPaths emit_csv(const BenchResult& result, const std::string& prefix) {
  if (result.samples.empty()) throw Error(ErrorCode::kInvalidArgument, "no benchmark samples to write");
  CsvPaths paths{prefix + "_raw.csv", prefix + "_summary.csv"};
  write_file(paths.raw, raw_csv(result.samples));
  write_file(paths.summary, summary_csv(result.summary));
  return paths;
}

}  // namespace vexbench
