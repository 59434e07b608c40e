//
// Copyright 2026 The mrqa-prep Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#include <arm_neon.h>

#include "mrqa/kernels.h"

namespace mrqa::kernels {
namespace {

double reduce_max_neon(const double* x, std::size_t n) {
  std::size_t i = 0;
  double m = x[0];
  if (n >= 4) {
    float64x2_t lo = vld1q_f64(x);
    float64x2_t hi = vld1q_f64(x + 2);
    for (i = 4; i + 4 <= n; i += 4) {
      lo = vmaxq_f64(lo, vld1q_f64(x + i));
      hi = vmaxq_f64(hi, vld1q_f64(x + i + 2));
    }
    const double lanes[4] = {vgetq_lane_f64(lo, 0), vgetq_lane_f64(lo, 1), vgetq_lane_f64(hi, 0),
                             vgetq_lane_f64(hi, 1)};
    m = lanes[0];
    for (int j = 1; j < 4; ++j) m = lanes[j] > m ? lanes[j] : m;
  }
  for (; i < n; ++i) m = x[i] > m ? x[i] : m;
  return m;
}

// Two 2-lane accumulators reproduce the canonical 4-lane order.
double reduce_sum_neon(const double* x, std::size_t n) {
  float64x2_t lo = vdupq_n_f64(0.0);
  float64x2_t hi = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    lo = vaddq_f64(lo, vld1q_f64(x + i));
    hi = vaddq_f64(hi, vld1q_f64(x + i + 2));
  }
  double s = (vgetq_lane_f64(lo, 0) + vgetq_lane_f64(lo, 1)) +
             (vgetq_lane_f64(hi, 0) + vgetq_lane_f64(hi, 1));
  for (; i < n; ++i) s += x[i];
  return s;
}

void add_scalar_neon(const double* x, double c, double* out, std::size_t n) {
  const float64x2_t vc = vdupq_n_f64(c);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) vst1q_f64(out + i, vaddq_f64(vld1q_f64(x + i), vc));
  for (; i < n; ++i) out[i] = x[i] + c;
}

std::size_t argmax_neon(const double* x, std::size_t n) {
  const double m = reduce_max_neon(x, n);
  for (std::size_t i = 0; i < n; ++i) {
    if (x[i] == m) return i;
  }
  return 0;
}

}  // namespace

const KernelTable& neon_table() {
  static const KernelTable table{Isa::kNeon, reduce_max_neon, reduce_sum_neon, add_scalar_neon,
                                 argmax_neon};
  return table;
}

}  // namespace mrqa::kernels
