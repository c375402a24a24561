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

#include "fedsplit/simd/kernels.h"

namespace fedsplit::simd {
namespace {

double SumSquaresScalar(const double* x, std::size_t n) {
  double lane[kLanes] = {0.0, 0.0, 0.0, 0.0};
  for (std::size_t i = 0; i < n; ++i) {
    const double sq = x[i] * x[i];
    lane[i % kLanes] += sq;
  }
  return (lane[0] + lane[1]) + (lane[2] + lane[3]);
}

double DotScalar(const double* x, const double* y, std::size_t n) {
  double lane[kLanes] = {0.0, 0.0, 0.0, 0.0};
  for (std::size_t i = 0; i < n; ++i) {
    const double p = x[i] * y[i];
    lane[i % kLanes] += p;
  }
  return (lane[0] + lane[1]) + (lane[2] + lane[3]);
}

void AxpyScalar(double a, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const double p = a * x[i];
    y[i] += p;
  }
}

void ScaleScalar(double a, double* x, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) x[i] *= a;
}

void AddScalar(const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += x[i];
}

void SubScalar(const double* x, const double* y, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = x[i] - y[i];
}

}  // namespace

const KernelTable& ScalarKernels() {
  static const KernelTable table{Target::kScalar, &SumSquaresScalar,
                                 &DotScalar,      &AxpyScalar,
                                 &ScaleScalar,    &AddScalar,
                                 &SubScalar};
  return table;
}

}  // namespace fedsplit::simd
