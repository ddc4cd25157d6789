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
#include <initializer_list>
#include <span>
#include <vector>

#include "vexbench/kernels.hpp"

namespace vexbench {

using DocId = std::int64_t;

/// Dense float32 vector with at least one element, all finite.
class Embedding {
 public:
  explicit Embedding(std::vector<float> values);
  Embedding(std::initializer_list<float> values);

  std::size_t dim() const noexcept { return values_.size(); }
  std::span<const float> values() const noexcept { return values_; }
  float operator[](std::size_t i) const noexcept { return values_[i]; }

  friend bool operator==(const Embedding&, const Embedding&) = default;

 private:
  std::vector<float> values_;
};

/// Throws kDimensionMismatch when the lengths differ.
void require_same_dim(std::size_t expected, std::size_t actual);

/// Inner product accumulated in double precision.
double dot(const Embedding& a, const Embedding& b);
double norm(const Embedding& a);

/// Cosine similarity clamped to [-1, 1]. Zero-norm operands are rejected.
double cosine(const Embedding& a, const Embedding& b);

// Span-level forms used by the index scans. The caller picks the kernel set.
double dot(std::span<const float> a, std::span<const float> b,
           const kernels::KernelSet& ks);
double norm(std::span<const float> a, const kernels::KernelSet& ks);
double cosine(std::span<const float> a, std::span<const float> b,
              const kernels::KernelSet& ks);

/// The cosine kernel proper: one dot product divided by precomputed norms,
/// clamped. Every similarity evaluation in the library funnels through here
/// and bumps the per-thread evaluation counter.
double cosine_prenormed(std::span<const float> a, double norm_a,
                        std::span<const float> b, double norm_b,
                        const kernels::KernelSet& ks);

/// Number of cosine kernel evaluations performed by the calling thread.
std::uint64_t cosine_evaluations() noexcept;

}  // namespace vexbench
