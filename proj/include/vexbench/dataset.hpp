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
#include <fstream>
#include <limits>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "vexbench/embedding.hpp"
#include "vexbench/flat_index.hpp"

namespace vexbench {

inline constexpr std::size_t kDefaultEmbeddingDim = 768;

/// One line of the enriched dataset: a document, the question paired with
/// it, and an embedding for each.
struct EnrichedRecord {
  std::int64_t example_id;
  std::string document_text;
  std::string question_text;
  Embedding document_embeddings;
  Embedding question_embeddings;

  friend bool operator==(const EnrichedRecord&, const EnrichedRecord&) = default;
};

/// Parses one JSON line. Unknown keys are ignored; the five record keys are
/// required. line_number only feeds error messages.
EnrichedRecord parse_record_line(std::string_view line, std::size_t line_number = 0);

/// Compact single-line JSON, keys in alphabetical order (document_embeddings,
/// document_text, example_id, question_embeddings, question_text), floats in
/// shortest round-trip form.
std::string format_record_line(const EnrichedRecord& record);

/// Lazily reads an enriched JSONL file, one record per call. Blank lines are
/// skipped. Malformed lines, duplicate example ids and dimension changes are
/// reported with their 1-based line number.
class JsonlReader {
 public:
  /// expected_dim == 0 adopts the dimension of the first record.
  explicit JsonlReader(const std::filesystem::path& path, std::size_t expected_dim = 0);

  std::optional<EnrichedRecord> next();

  std::size_t line_number() const noexcept { return line_number_; }
  std::size_t dim() const noexcept { return dim_; }

 private:
  std::filesystem::path path_;
  std::ifstream in_;
  std::string line_;
  std::size_t line_number_ = 0;
  std::size_t dim_;
  std::unordered_set<std::int64_t> seen_ids_;
};

std::vector<EnrichedRecord> read_jsonl(const std::filesystem::path& path,
                                       std::size_t limit = std::numeric_limits<std::size_t>::max());

/// Appends records to a file, flushing on request.
class JsonlWriter {
 public:
  explicit JsonlWriter(const std::filesystem::path& path, bool append = false);

  void write(const EnrichedRecord& record);
  void flush();
  std::size_t count() const noexcept { return count_; }

 private:
  std::filesystem::path path_;
  std::ofstream out_;
  std::size_t count_ = 0;
};

std::size_t write_jsonl(std::span<const EnrichedRecord> records, const std::filesystem::path& path);

struct SynthConfig {
  std::size_t n = 1;
  std::size_t dim = kDefaultEmbeddingDim;
  std::uint64_t seed = 0;
  /// Scale of the Gaussian perturbation added to each document vector to
  /// form its question vector. 0 makes the question equal to its document.
  double noise = 0.0;
};

/// Deterministic synthetic corpus. Record i depends only on (seed, i, dim,
/// noise): its document is a random unit vector and its question is
/// normalize(document + noise * g) with g a fresh Gaussian vector.
class SynthCorpus {
 public:
  explicit SynthCorpus(SynthConfig config);

  std::optional<EnrichedRecord> next();
  EnrichedRecord at(std::size_t i) const;
  std::size_t size() const noexcept { return config_.n; }

 private:
  SynthConfig config_;
  std::size_t cursor_ = 0;
};

std::vector<EnrichedRecord> synth_corpus(const SynthConfig& config);

/// Unit-normalizes in double precision and rounds back to float.
std::vector<float> normalized(std::span<const double> v);

/// The (example_id, document embedding) pairs of the first n records.
std::vector<Document> documents_of(std::span<const EnrichedRecord> records,
                                   std::size_t n = std::numeric_limits<std::size_t>::max());

/// Standard normal deviates from a 64-bit Mersenne Twister via Box-Muller.
/// Spelled out (rather than std::normal_distribution) so that generated
/// corpora are identical across standard library implementations.
class GaussianSource {
 public:
  explicit GaussianSource(std::uint64_t seed);
  double next();

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace vexbench
