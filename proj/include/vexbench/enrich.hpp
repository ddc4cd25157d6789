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
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "vexbench/dataset.hpp"
#include "vexbench/remote.hpp"

namespace vexbench {

/// Maps a batch of texts to one embedding per text.
class EmbeddingProvider {
 public:
  virtual ~EmbeddingProvider() = default;

  virtual std::vector<Embedding> encode(std::span<const std::string> texts,
                                        std::size_t max_seq_len) = 0;
  virtual std::size_t dim() const noexcept = 0;
  /// Human-readable identity used in diagnostics.
  virtual std::string describe() const = 0;
};

/// Each vector is a pure function of (seed, text): a unit Gaussian vector
/// drawn from a generator keyed by an FNV-1a hash of the text.
class SyntheticProvider final : public EmbeddingProvider {
 public:
  SyntheticProvider(std::uint64_t seed, std::size_t dim);

  std::vector<Embedding> encode(std::span<const std::string> texts, std::size_t max_seq_len) override;
  std::size_t dim() const noexcept override { return dim_; }
  std::string describe() const override;

 private:
  std::uint64_t seed_;
  std::size_t dim_;
};

struct RetryPolicy {
  std::size_t attempts = 3;
  double backoff_seconds = 0.5;
};

/// Client for an embedding service:
///   POST /encode  {"texts": [...], "max_seq_len": n}  ->  {"embeddings": [[...], ...]}
class RemoteProvider final : public EmbeddingProvider {
 public:
  RemoteProvider(Endpoint endpoint, std::size_t dim, RetryPolicy retry = {});

  std::vector<Embedding> encode(std::span<const std::string> texts, std::size_t max_seq_len) override;
  std::size_t dim() const noexcept override { return dim_; }
  std::string describe() const override { return endpoint_.to_string(); }

 private:
  Endpoint endpoint_;
  std::size_t dim_;
  RetryPolicy retry_;
};

/// Keeps the first max_tokens whitespace-separated tokens, joined by single
/// spaces. A stand-in for word-piece truncation, not equivalent to it.
std::string truncate_tokens(std::string_view text, std::size_t max_tokens);

/// An input row before enrichment.
struct RawRecord {
  std::int64_t example_id;
  std::string document_text;
  std::string question_text;
};

/// Reads JSONL rows carrying example_id, document_text and question_text
/// (other keys are ignored). Unusable lines are skipped and counted.
class RawJsonlReader {
 public:
  explicit RawJsonlReader(const std::filesystem::path& path);

  std::optional<RawRecord> next();
  std::size_t skipped() const noexcept { return skipped_; }

 private:
  std::filesystem::path path_;
  std::ifstream in_;
  std::string line_;
  std::size_t skipped_ = 0;
};

struct EnrichmentConfig {
  std::size_t batch_size = 32;
  std::size_t max_seq_len = 256;
  std::size_t embedding_dim = kDefaultEmbeddingDim;
  EmbeddingProvider* provider = nullptr;
};

struct EnrichStats {
  std::size_t records = 0;
  std::size_t batches = 0;
  std::size_t provider_calls = 0;
  /// Largest number of raw plus enriched records held at once.
  std::size_t peak_resident = 0;
};

using RawSource = std::function<std::optional<RawRecord>()>;
using BatchSink = std::function<void(std::span<const EnrichedRecord>)>;

/// Pulls raw rows in batches of config.batch_size, embeds documents and
/// questions with one provider call per batch, and hands each finished
/// batch to the sink in input order. A failing batch reaches the sink not
/// at all.
EnrichStats enrich(const RawSource& source, const EnrichmentConfig& config, const BatchSink& sink);

struct EnrichFileStats {
  EnrichStats enrich;
  std::size_t resumed = 0;
  std::size_t skipped_lines = 0;
};

/// File-to-file enrichment, flushed after every batch. If the output
/// already holds complete records, that many input rows are skipped and the
/// run continues appending; a torn trailing line is discarded first.
EnrichFileStats enrich_file(const std::filesystem::path& in, const std::filesystem::path& out,
                            const EnrichmentConfig& config);

}  // namespace vexbench
