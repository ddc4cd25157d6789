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
#include <cmath>
#include <numbers>
#include <string>

#include "vexbench/dataset.hpp"
#include "vexbench/error.hpp"

namespace vexbench {
namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

double unit_interval(std::mt19937_64& engine) {
  // 53 random bits -> [0, 1).
  return static_cast<double>(engine() >> 11) * 0x1.0p-53;
}

}  // namespace

GaussianSource::GaussianSource(std::uint64_t seed) : engine_(seed) {}

double GaussianSource::next() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  const double u1 = 1.0 - unit_interval(engine_);  // (0, 1]
  const double u2 = unit_interval(engine_);
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(theta);
  has_spare_ = true;
  return r * std::cos(theta);
}

std::vector<float> normalized(std::span<const double> v) {
  double ss = 0.0;
  for (double x : v) ss += x * x;
  const double n = std::sqrt(ss);
  if (n == 0.0) throw Error(ErrorCode::kZeroNorm, "cannot normalize a zero vector");
  std::vector<float> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = static_cast<float>(v[i] / n);
  return out;
}

SynthCorpus::SynthCorpus(SynthConfig config) : config_(config) {
  if (config_.n == 0) throw Error(ErrorCode::kInvalidArgument, "synthetic corpus needs n >= 1");
  if (config_.dim == 0) throw Error(ErrorCode::kInvalidArgument, "synthetic corpus needs dim >= 1");
  if (!(config_.noise >= 0.0 && config_.noise <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "noise must lie in [0, 1]");
  }
}

EnrichedRecord SynthCorpus::at(std::size_t i) const {
  GaussianSource gauss(splitmix64(config_.seed ^ splitmix64(i)));
  std::vector<double> doc(config_.dim);
  for (auto& x : doc) x = gauss.next();
  std::vector<float> doc_unit = normalized(doc);

  // The perturbation is always drawn so that documents do not depend on
  // the noise level.
  std::vector<double> perturbed(config_.dim);
  for (std::size_t j = 0; j < config_.dim; ++j) {
    perturbed[j] = static_cast<double>(doc_unit[j]) + config_.noise * gauss.next();
  }
  std::vector<float> question = config_.noise == 0.0 ? doc_unit : normalized(perturbed);

  const auto id = static_cast<std::int64_t>(i);
  return EnrichedRecord{id, "synthetic document " + std::to_string(i),
                        "synthetic question " + std::to_string(i), Embedding(std::move(doc_unit)),
                        Embedding(std::move(question))};
}

std::optional<EnrichedRecord> SynthCorpus::next() {
  if (cursor_ >= config_.n) return std::nullopt;
  return at(cursor_++);
}

std::vector<EnrichedRecord> synth_corpus(const SynthConfig& config) {
  SynthCorpus corpus(config);
  std::vector<EnrichedRecord> out;
  out.reserve(config.n);
  while (auto r = corpus.next()) out.push_back(std::move(*r));
  return out;
}

std::vector<Document> documents_of(std::span<const EnrichedRecord> records, std::size_t n) {
  std::vector<Document> out;
  const std::size_t count = std::min(n, records.size());
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    out.push_back({records[i].example_id, records[i].document_embeddings});
  }
  return out;
}

}  // namespace vexbench
