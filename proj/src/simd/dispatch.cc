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

#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "fedsplit/simd/kernels.h"

namespace fedsplit::simd {

bool CpuSupportsAvx2();
bool CpuSupportsNeon();

namespace {

const KernelTable* Compiled(Target target) {
  switch (target) {
    case Target::kScalar:
      return &ScalarKernels();
    case Target::kAvx2:
      return Avx2Kernels();
    case Target::kNeon:
      return NeonKernels();
  }
  return nullptr;
}

const KernelTable* ChooseInitial() {
  if (const char* env = std::getenv("FEDSPLIT_SIMD"); env != nullptr) {
    const std::string want(env);
    for (Target t : AvailableTargets()) {
      if (TargetName(t) == want) return Compiled(t);
    }
  }
  return Compiled(AvailableTargets().back());
}

std::atomic<const KernelTable*>& ActiveSlot() {
  static std::atomic<const KernelTable*> slot{ChooseInitial()};
  return slot;
}

}  // namespace

std::string_view TargetName(Target target) {
  switch (target) {
    case Target::kScalar:
      return "scalar";
    case Target::kAvx2:
      return "avx2";
    case Target::kNeon:
      return "neon";
  }
  return "unknown";
}

bool CpuSupports(Target target) {
  switch (target) {
    case Target::kScalar:
      return true;
    case Target::kAvx2:
      return CpuSupportsAvx2();
    case Target::kNeon:
      return CpuSupportsNeon();
  }
  return false;
}

std::vector<Target> AvailableTargets() {
  std::vector<Target> out;
  for (Target t : {Target::kScalar, Target::kAvx2, Target::kNeon}) {
    if (Compiled(t) != nullptr && CpuSupports(t)) out.push_back(t);
  }
  return out;
}

const KernelTable& KernelsFor(Target target) {
  const KernelTable* table = Compiled(target);
  if (table == nullptr || !CpuSupports(target)) {
    throw std::invalid_argument("SIMD target '" +
                                std::string(TargetName(target)) +
                                "' is not available on this machine");
  }
  return *table;
}

const KernelTable& Active() {
  return *ActiveSlot().load(std::memory_order_acquire);
}

void SetActive(Target target) {
  ActiveSlot().store(&KernelsFor(target), std::memory_order_release);
}

}  // namespace fedsplit::simd
