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
#include "vexbench/kernels.hpp"

#include <cstdlib>

#include "kernels_internal.hpp"

namespace vexbench::kernels {
namespace {

constexpr KernelSet kScalar{"scalar", &detail::dot_scalar};

#if defined(VEXBENCH_HAVE_AVX2)
constexpr KernelSet kAvx2{"avx2", &detail::dot_avx2};
#endif

#if defined(VEXBENCH_HAVE_NEON)
constexpr KernelSet kNeon{"neon", &detail::dot_neon};
#endif

const KernelSet& select_active() noexcept {
  if (const char* forced = std::getenv("VEXBENCH_KERNEL")) {
    if (const KernelSet* ks = find(forced)) return *ks;
  }
  if (const KernelSet* ks = avx2()) return *ks;
  if (const KernelSet* ks = neon()) return *ks;
  return kScalar;
}

}  // namespace

const KernelSet& scalar() noexcept { return kScalar; }

const KernelSet* avx2() noexcept {
#if defined(VEXBENCH_HAVE_AVX2)
  static const bool supported =
      __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
  return supported ? &kAvx2 : nullptr;
#else
  return nullptr;
#endif
}

const KernelSet* neon() noexcept {
#if defined(VEXBENCH_HAVE_NEON)
  // Advanced SIMD is mandatory on AArch64.
  return &kNeon;
#else
  return nullptr;
#endif
}

const KernelSet& active() noexcept {
  static const KernelSet& chosen = select_active();
  return chosen;
}

std::vector<const KernelSet*> available() {
  std::vector<const KernelSet*> out{&kScalar};
  if (const KernelSet* ks = avx2()) out.push_back(ks);
  if (const KernelSet* ks = neon()) out.push_back(ks);
  return out;
}

const KernelSet* find(std::string_view name) noexcept {
  if (name == kScalar.name) return &kScalar;
  if (name == "avx2") return avx2();
  if (name == "neon") return neon();
  return nullptr;
}

}  // namespace vexbench::kernels
