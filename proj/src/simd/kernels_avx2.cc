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

// AVX2 variants. Compiled with per-function target attributes so the rest of
// the build stays at the baseline ISA; only called after a CPUID check.

#include "fedsplit/simd/kernels.h"

#if defined(__x86_64__) && (defined(__GNUC__) || defined(__clang__))
#define FEDSPLIT_HAVE_AVX2_KERNELS 1
#include <immintrin.h>
#endif

namespace fedsplit::simd {

#ifdef FEDSPLIT_HAVE_AVX2_KERNELS
namespace {

#define FEDSPLIT_AVX2 __attribute__((target("avx2")))

FEDSPLIT_AVX2 double HorizontalLanes(__m256d acc, const double* tail_x,
                                     const double* tail_y, std::size_t tail) {
  alignas(32) double lane[kLanes];
  _mm256_store_pd(lane, acc);
  // The tail starts on a multiple of kLanes, so element j lands in lane j.
  for (std::size_t j = 0; j < tail; ++j) {
    const double p = tail_x[j] * tail_y[j];
    lane[j] += p;
  }
  return (lane[0] + lane[1]) + (lane[2] + lane[3]);
}

FEDSPLIT_AVX2 double SumSquaresAvx2(const double* x, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    const __m256d v = _mm256_loadu_pd(x + i);
    acc = _mm256_add_pd(acc, _mm256_mul_pd(v, v));
  }
  return HorizontalLanes(acc, x + i, x + i, n - i);
}

FEDSPLIT_AVX2 double DotAvx2(const double* x, const double* y, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    const __m256d a = _mm256_loadu_pd(x + i);
    const __m256d b = _mm256_loadu_pd(y + i);
    acc = _mm256_add_pd(acc, _mm256_mul_pd(a, b));
  }
  return HorizontalLanes(acc, x + i, y + i, n - i);
}

FEDSPLIT_AVX2 void AxpyAvx2(double a, const double* x, double* y,
                            std::size_t n) {
  const __m256d va = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    const __m256d p = _mm256_mul_pd(va, _mm256_loadu_pd(x + i));
    _mm256_storeu_pd(y + i, _mm256_add_pd(_mm256_loadu_pd(y + i), p));
  }
  for (; i < n; ++i) {
    const double p = a * x[i];
    y[i] += p;
  }
}

FEDSPLIT_AVX2 void ScaleAvx2(double a, double* x, std::size_t n) {
  const __m256d va = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    _mm256_storeu_pd(x + i, _mm256_mul_pd(va, _mm256_loadu_pd(x + i)));
  }
  for (; i < n; ++i) x[i] *= a;
}

FEDSPLIT_AVX2 void AddAvx2(const double* x, double* y, std::size_t n) {
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    _mm256_storeu_pd(
        y + i, _mm256_add_pd(_mm256_loadu_pd(y + i), _mm256_loadu_pd(x + i)));
  }
  for (; i < n; ++i) y[i] += x[i];
}

FEDSPLIT_AVX2 void SubAvx2(const double* x, const double* y, double* out,
                           std::size_t n) {
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    _mm256_storeu_pd(out + i, _mm256_sub_pd(_mm256_loadu_pd(x + i),
                                            _mm256_loadu_pd(y + i)));
  }
  for (; i < n; ++i) out[i] = x[i] - y[i];
}

#undef FEDSPLIT_AVX2

}  // namespace

const KernelTable* Avx2Kernels() {
  static const KernelTable table{Target::kAvx2, &SumSquaresAvx2, &DotAvx2,
                                 &AxpyAvx2,     &ScaleAvx2,      &AddAvx2,
                                 &SubAvx2};
  return &table;
}

bool CpuSupportsAvx2() { return __builtin_cpu_supports("avx2"); }

#else

const KernelTable* Avx2Kernels() { return nullptr; }
bool CpuSupportsAvx2() { return false; }

#endif  // FEDSPLIT_HAVE_AVX2_KERNELS

}  // namespace fedsplit::simd
