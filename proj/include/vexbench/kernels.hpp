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
#include <string_view>
#include <vector>

namespace vexbench::kernels {

// All dot-product variants accumulate float products into kLanes double
// accumulators: element i goes to lane i % kLanes, and the lanes are folded
// by fold_lanes(). float*float is exact in double, so the scalar and vector
// variants produce bit-identical results.
inline constexpr std::size_t kLanes = 16;

using DotFn = double (*)(const float* a, const float* b, std::size_t n) noexcept;

struct KernelSet {
  std::string_view name;
  DotFn dot;
};

/// Portable reference implementation. Always available.
const KernelSet& scalar() noexcept;

/// nullptr unless compiled in and supported by the running CPU.
const KernelSet* avx2() noexcept;
const KernelSet* neon() noexcept;

/// Fastest available set, chosen once at first use. VEXBENCH_KERNEL=<name>
/// forces a specific one.
const KernelSet& active() noexcept;

std::vector<const KernelSet*> available();
const KernelSet* find(std::string_view name) noexcept;

/// s_j = (L[j] + L[j+4]) + (L[j+8] + L[j+12]) for j < 4, then
/// (s_0 + s_1) + (s_2 + s_3).
double fold_lanes(const double* lanes) noexcept;

}  // namespace vexbench::kernels
