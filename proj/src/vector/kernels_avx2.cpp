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
#include <immintrin.h>

#include "kernels_internal.hpp"
#include "vexbench/kernels.hpp"

namespace vexbench::kernels::detail {

constexpr std::size_t kPrefetchAhead = 768;

// acc0..acc3 hold lanes 0-3, 4-7, 8-11 and 12-15 of the shared lane layout.
double dot_avx2(const float* a, const float* b, std::size_t n) noexcept {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  __m256d acc2 = _mm256_setzero_pd();
  __m256d acc3 = _mm256_setzero_pd();

  std::size_t i = 0;
  // Converting straight from memory keeps the shuffle port free. The
  // prefetch runs one 768-wide row ahead on b, which is the corpus side in
  // every scan; it is only a hint and never faults past the end.
  for (; i + kLanes <= n; i += kLanes) {
    _mm_prefetch(reinterpret_cast<const char*>(b + i + kPrefetchAhead), _MM_HINT_T0);
    acc0 = _mm256_fmadd_pd(_mm256_cvtps_pd(_mm_loadu_ps(a + i)),
                           _mm256_cvtps_pd(_mm_loadu_ps(b + i)), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_cvtps_pd(_mm_loadu_ps(a + i + 4)),
                           _mm256_cvtps_pd(_mm_loadu_ps(b + i + 4)), acc1);
    acc2 = _mm256_fmadd_pd(_mm256_cvtps_pd(_mm_loadu_ps(a + i + 8)),
                           _mm256_cvtps_pd(_mm_loadu_ps(b + i + 8)), acc2);
    acc3 = _mm256_fmadd_pd(_mm256_cvtps_pd(_mm_loadu_ps(a + i + 12)),
                           _mm256_cvtps_pd(_mm_loadu_ps(b + i + 12)), acc3);
  }

  alignas(32) double lanes[kLanes];
  _mm256_store_pd(lanes, acc0);
  _mm256_store_pd(lanes + 4, acc1);
  _mm256_store_pd(lanes + 8, acc2);
  _mm256_store_pd(lanes + 12, acc3);
  for (std::size_t l = 0; i < n; ++i, ++l) {
    lanes[l] += static_cast<double>(a[i]) * static_cast<double>(b[i]);
  }
  return fold_lanes(lanes);
}

}  // namespace vexbench::kernels::detail
