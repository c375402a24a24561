// Copyright 2026 The FedSplit Authors.
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

// NEON variants for aarch64. Two float64x2 accumulators cover the four
// striped lanes: acc01 holds lanes {0,1}, acc23 holds lanes {2,3}.

#include "fedsplit/simd/kernels.h"

#if defined(__aarch64__)
#define FEDSPLIT_HAVE_NEON_KERNELS 1
#include <arm_neon.h>
#endif

namespace fedsplit::simd {

#ifdef FEDSPLIT_HAVE_NEON_KERNELS
namespace {

double CombineLanes(float64x2_t acc01, float64x2_t acc23, const double* tail_x,
                    const double* tail_y, std::size_t tail) {
  double lane[kLanes];
  vst1q_f64(lane, acc01);
  vst1q_f64(lane + 2, acc23);
  for (std::size_t j = 0; j < tail; ++j) {
    const double p = tail_x[j] * tail_y[j];
    lane[j] += p;
  }
  return (lane[0] + lane[1]) + (lane[2] + lane[3]);
}

double SumSquaresNeon(const double* x, std::size_t n) {
  float64x2_t acc01 = vdupq_n_f64(0.0);
  float64x2_t acc23 = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    const float64x2_t a = vld1q_f64(x + i);
    const float64x2_t b = vld1q_f64(x + i + 2);
    acc01 = vaddq_f64(acc01, vmulq_f64(a, a));
    acc23 = vaddq_f64(acc23, vmulq_f64(b, b));
  }
  return CombineLanes(acc01, acc23, x + i, x + i, n - i);
}

double DotNeon(const double* x, const double* y, std::size_t n) {
  float64x2_t acc01 = vdupq_n_f64(0.0);
  float64x2_t acc23 = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    acc01 = vaddq_f64(acc01, vmulq_f64(vld1q_f64(x + i), vld1q_f64(y + i)));
    acc23 = vaddq_f64(acc23,
                      vmulq_f64(vld1q_f64(x + i + 2), vld1q_f64(y + i + 2)));
  }
  return CombineLanes(acc01, acc23, x + i, y + i, n - i);
}

void AxpyNeon(double a, const double* x, double* y, std::size_t n) {
  const float64x2_t va = vdupq_n_f64(a);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    vst1q_f64(y + i, vaddq_f64(vld1q_f64(y + i), vmulq_f64(va, vld1q_f64(x + i))));
  }
  for (; i < n; ++i) {
    const double p = a * x[i];
    y[i] += p;
  }
}

void ScaleNeon(double a, double* x, std::size_t n) {
  const float64x2_t va = vdupq_n_f64(a);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) vst1q_f64(x + i, vmulq_f64(va, vld1q_f64(x + i)));
  for (; i < n; ++i) x[i] *= a;
}

void AddNeon(const double* x, double* y, std::size_t n) {
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    vst1q_f64(y + i, vaddq_f64(vld1q_f64(y + i), vld1q_f64(x + i)));
  }
  for (; i < n; ++i) y[i] += x[i];
}

void SubNeon(const double* x, const double* y, double* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    vst1q_f64(out + i, vsubq_f64(vld1q_f64(x + i), vld1q_f64(y + i)));
  }
  for (; i < n; ++i) out[i] = x[i] - y[i];
}

}  // namespace

const KernelTable* NeonKernels() {
  static const KernelTable table{Target::kNeon, &SumSquaresNeon, &DotNeon,
                                 &AxpyNeon,     &ScaleNeon,      &AddNeon,
                                 &SubNeon};
  return &table;
}

bool CpuSupportsNeon() { return true; }

#else

const KernelTable* NeonKernels() { return nullptr; }
bool CpuSupportsNeon() { return false; }

#endif  // FEDSPLIT_HAVE_NEON_KERNELS

}  // namespace fedsplit::simd
