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

#ifndef FEDSPLIT_SIMD_KERNELS_H_
#define FEDSPLIT_SIMD_KERNELS_H_

#include <cstddef>
#include <string_view>
#include <vector>

namespace fedsplit::simd {

// Every reduction kernel accumulates into kLanes striped partial sums
// (element i goes to lane i % kLanes) and combines them as
// (l0 + l1) + (l2 + l3). The scalar reference does exactly the same, so all
// targets are bitwise interchangeable. Elementwise kernels never fuse
// multiply and add.
inline constexpr std::size_t kLanes = 4;

enum class Target { kScalar, kAvx2, kNeon };

std::string_view TargetName(Target target);

struct KernelTable {
  Target target;
  // Returns sum_i x[i]^2.
  double (*sum_squares)(const double* x, std::size_t n);
  // Returns sum_i x[i] * y[i].
  double (*dot)(const double* x, const double* y, std::size_t n);
  // y[i] += a * x[i].
  void (*axpy)(double a, const double* x, double* y, std::size_t n);
  // x[i] *= a.
  void (*scale)(double a, double* x, std::size_t n);
  // y[i] += x[i].
  void (*add)(const double* x, double* y, std::size_t n);
  // out[i] = x[i] - y[i].
  void (*sub)(const double* x, const double* y, double* out, std::size_t n);
};

const KernelTable& ScalarKernels();
// nullptr when the target was not compiled in.
const KernelTable* Avx2Kernels();
const KernelTable* NeonKernels();

// Whether the running CPU can execute `target`.
bool CpuSupports(Target target);

// Targets that are both compiled in and supported by this CPU, scalar first.
std::vector<Target> AvailableTargets();

const KernelTable& KernelsFor(Target target);

// The table used by ParamVector arithmetic. Chosen once on first use: the
// widest available target, unless FEDSPLIT_SIMD=scalar|avx2|neon says
// otherwise.
const KernelTable& Active();

// Overrides the active table. Not thread-safe with concurrent arithmetic;
// intended for tests and the CLI's startup path.
void SetActive(Target target);

}  // namespace fedsplit::simd

#endif  // FEDSPLIT_SIMD_KERNELS_H_
