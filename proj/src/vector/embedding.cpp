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
#include "vexbench/embedding.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "vexbench/error.hpp"

namespace vexbench {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "invalid-argument";
    case ErrorCode::kDimensionMismatch: return "dimension-mismatch";
    case ErrorCode::kZeroNorm: return "zero-norm";
    case ErrorCode::kNonFinite: return "non-finite";
    case ErrorCode::kDuplicateId: return "duplicate-id";
    case ErrorCode::kIndexSealed: return "index-sealed";
    case ErrorCode::kIndexNotSealed: return "index-not-sealed";
    case ErrorCode::kMalformedRecord: return "malformed-record";
    case ErrorCode::kIo: return "io";
    case ErrorCode::kConnection: return "connection";
    case ErrorCode::kProtocol: return "protocol";
    case ErrorCode::kProvider: return "provider";
    case ErrorCode::kArity: return "arity";
  }
  return "unknown";
}

namespace {

thread_local std::uint64_t g_cosine_evaluations = 0;

void validate(const std::vector<float>& values) {
  if (values.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "embedding must have at least one element");
  }
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i])) {
      throw Error(ErrorCode::kNonFinite,
                  "embedding element " + std::to_string(i) + " is not finite");
    }
  }
}

}  // namespace

Embedding::Embedding(std::vector<float> values) : values_(std::move(values)) {
  validate(values_);
}

Embedding::Embedding(std::initializer_list<float> values) : values_(values) {
  validate(values_);
}

void require_same_dim(std::size_t expected, std::size_t actual) {
  if (expected != actual) {
    throw Error(ErrorCode::kDimensionMismatch,
                "dimension mismatch: expected " + std::to_string(expected) +
                    ", got " + std::to_string(actual));
  }
}

double dot(std::span<const float> a, std::span<const float> b,
           const kernels::KernelSet& ks) {
  require_same_dim(a.size(), b.size());
  return ks.dot(a.data(), b.data(), a.size());
}

double norm(std::span<const float> a, const kernels::KernelSet& ks) {
  return std::sqrt(ks.dot(a.data(), a.data(), a.size()));
}

double cosine_prenormed(std::span<const float> a, double norm_a,
                        std::span<const float> b, double norm_b,
                        const kernels::KernelSet& ks) {
  ++g_cosine_evaluations;
  if (norm_a == 0.0 || norm_b == 0.0) {
    throw Error(ErrorCode::kZeroNorm, "cosine similarity is undefined for a zero-norm vector");
  }
  const double c = dot(a, b, ks) / (norm_a * norm_b);
  return std::clamp(c, -1.0, 1.0);
}

double cosine(std::span<const float> a, std::span<const float> b,
              const kernels::KernelSet& ks) {
  require_same_dim(a.size(), b.size());
  return cosine_prenormed(a, norm(a, ks), b, norm(b, ks), ks);
}

double dot(const Embedding& a, const Embedding& b) {
  return dot(a.values(), b.values(), kernels::active());
}

double norm(const Embedding& a) { return norm(a.values(), kernels::active()); }

double cosine(const Embedding& a, const Embedding& b) {
  return cosine(a.values(), b.values(), kernels::active());
}

std::uint64_t cosine_evaluations() noexcept { return g_cosine_evaluations; }

}  // namespace vexbench
