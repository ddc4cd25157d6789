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
#include <arm_neon.h>

#include "kernels_internal.hpp"
#include "vexbench/kernels.hpp"

namespace vexbench::kernels::detail {

// acc[p] holds lanes 2p and 2p+1 of the shared lane layout.
double dot_neon(const float* a, const float* b, std::size_t n) noexcept {
  float64x2_t acc[8];
  for (auto& v : acc) v = vdupq_n_f64(0.0);

  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    for (std::size_t q = 0; q < 4; ++q) {
      const float32x4_t va = vld1q_f32(a + i + 4 * q);
      const float32x4_t vb = vld1q_f32(b + i + 4 * q);
      acc[2 * q] = vfmaq_f64(acc[2 * q], vcvt_f64_f32(vget_low_f32(va)),
                             vcvt_f64_f32(vget_low_f32(vb)));
      acc[2 * q + 1] = vfmaq_f64(acc[2 * q + 1], vcvt_high_f64_f32(va),
                                 vcvt_high_f64_f32(vb));
    }
  }

  double lanes[kLanes];
  for (std::size_t p = 0; p < 8; ++p) vst1q_f64(lanes + 2 * p, acc[p]);
  for (std::size_t l = 0; i < n; ++i, ++l) {
    lanes[l] += static_cast<double>(a[i]) * static_cast<double>(b[i]);
  }
  return fold_lanes(lanes);
}

}  // namespace vexbench::kernels::detail
