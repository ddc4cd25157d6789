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
#include <algorithm>

#include <json.hpp>

#include "vexbench/enrich.hpp"
#include "vexbench/error.hpp"

namespace vexbench {

RawJsonlReader::RawJsonlReader(const std::filesystem::path& path) : path_(path), in_(path) {
  if (!in_) throw Error(ErrorCode::kIo, "cannot open " + path.string());
}

std::optional<RawRecord> RawJsonlReader::next() {
  using nlohmann::json;
  while (std::getline(in_, line_)) {
    if (line_.find_first_not_of(" \t\r") == std::string::npos) continue;
    const json j = json::parse(line_, nullptr, false);
    if (j.is_discarded() || !j.is_object() || !j.contains("example_id") ||
        !j["example_id"].is_number_integer() || !j.contains("document_text") ||
        !j["document_text"].is_string() || !j.contains("question_text") ||
        !j["question_text"].is_string()) {
      ++skipped_;
      continue;
    }
    return RawRecord{j["example_id"].get<std::int64_t>(), j["document_text"].get<std::string>(),
                     j["question_text"].get<std::string>()};
  }
  if (in_.bad()) throw Error(ErrorCode::kIo, "read failure on " + path_.string());
  return std::nullopt;
}

EnrichStats enrich(const RawSource& source, const EnrichmentConfig& config, const BatchSink& sink) {
  if (config.batch_size == 0) throw Error(ErrorCode::kInvalidArgument, "batch_size must be at least 1");
  if (config.max_seq_len == 0) throw Error(ErrorCode::kInvalidArgument, "max_seq_len must be at least 1");
  if (config.provider == nullptr) throw Error(ErrorCode::kInvalidArgument, "no embedding provider configured");

  EnrichStats stats;
  std::vector<RawRecord> raw;
  std::vector<std::string> texts;
  std::vector<EnrichedRecord> enriched;
  raw.reserve(config.batch_size);

  bool exhausted = false;
  while (!exhausted) {
    raw.clear();
    while (raw.size() < config.batch_size) {
      auto r = source();
      if (!r) {
        exhausted = true;
        break;
      }
      raw.push_back(std::move(*r));
    }
    if (raw.empty()) break;

    // Documents first, then questions, in one provider round trip.
    texts.clear();
    for (const auto& r : raw) texts.push_back(truncate_tokens(r.document_text, config.max_seq_len));
    for (const auto& r : raw) texts.push_back(truncate_tokens(r.question_text, config.max_seq_len));
    ++stats.provider_calls;
    std::vector<Embedding> vectors = config.provider->encode(texts, config.max_seq_len);
    if (vectors.size() != texts.size()) {
      throw Error(ErrorCode::kProvider, "provider " + config.provider->describe() + " returned " +
                                            std::to_string(vectors.size()) + " vectors for " +
                                            std::to_string(texts.size()) + " texts");
    }
    for (const auto& v : vectors) {
      if (v.dim() != config.embedding_dim) {
        throw Error(ErrorCode::kDimensionMismatch,
                    "provider " + config.provider->describe() + " returned dimension " +
                        std::to_string(v.dim()) + ", expected " + std::to_string(config.embedding_dim));
      }
    }

    enriched.clear();
    for (std::size_t i = 0; i < raw.size(); ++i) {
      enriched.push_back(EnrichedRecord{raw[i].example_id, std::move(raw[i].document_text),
                                        std::move(raw[i].question_text), std::move(vectors[i]),
                                        std::move(vectors[raw.size() + i])});
    }
    stats.peak_resident = std::max(stats.peak_resident, raw.size() + enriched.size());
    sink(enriched);
    stats.records += enriched.size();
    ++stats.batches;
  }
  return stats;
}

namespace {

// Number of complete, parseable records at the head of an existing output
// file; anything after them is cut off.
std::size_t recover_output(const std::filesystem::path& out) {
  if (!std::filesystem::exists(out)) return 0;
  std::ifstream in(out, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + out.string());
  std::size_t good = 0;
  std::uintmax_t good_bytes = 0;
  std::string line;
  while (std::getline(in, line)) {
    if (in.eof()) break;  // no trailing newline: torn write
    try {
      parse_record_line(line, good + 1);
    } catch (const Error&) {
      break;
    }
    ++good;
    good_bytes += line.size() + 1;
  }
  in.close();
  if (std::filesystem::file_size(out) != good_bytes) std::filesystem::resize_file(out, good_bytes);
  return good;
}

}  // namespace

EnrichFileStats enrich_file(const std::filesystem::path& in, const std::filesystem::path& out,
                            const EnrichmentConfig& config) {
  EnrichFileStats stats;
  stats.resumed = recover_output(out);

  RawJsonlReader reader(in);
  for (std::size_t i = 0; i < stats.resumed; ++i) {
    if (!reader.next()) {
      throw Error(ErrorCode::kInvalidArgument, out.string() + " holds more records than " + in.string());
    }
  }

  JsonlWriter writer(out, /*append=*/true);
  stats.enrich = enrich([&] { return reader.next(); }, config,
                        [&](std::span<const EnrichedRecord> batch) {
                          for (const auto& r : batch) writer.write(r);
                          writer.flush();
                        });
  stats.skipped_lines = reader.skipped();
  return stats;
}

}  // namespace vexbench
