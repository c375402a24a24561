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

#ifndef FEDSPLIT_INTERMEDIARY_H_
#define FEDSPLIT_INTERMEDIARY_H_

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "fedsplit/synthdata.h"

namespace fedsplit {

// Adaptive intermediaries: each client is split into v disjoint sub-clients
// so the aggregation noise sigma = z C / N shrinks with the larger N. The
// measured noise level xi and diversity phi scale roughly as xi_v = xi / v
// and phi_v = v phi, so lambda_v = lambda / v^2, and the v that brings the
// ratio to ~1/N is sqrt(N * xi / phi).

struct SplitPlan {
  std::vector<int> v_per_client;
  std::vector<IntermediaryPartition> partitions;
  int total_participants = 0;
  int round_set_at = 0;
};

struct RatioObservation {
  double xi = 0.0;
  double phi = 1.0;
  double lambda = 0.0;
  int v_current = 1;
};

// Which N the target ratio 1/N refers to.
enum class TargetCount {
  kClients,       // number of original clients (silos)
  kParticipants,  // current number of sub-clients N_v
};

// max(1, round(sqrt(N * xi / phi))) from v=1-equivalent levels.
// Throws std::invalid_argument unless phi_base > 0 and N >= 1.
int TargetV(int n, double xi_base, double phi_base);

// Inverts the scaling laws: (v xi_v, phi_v / v).
std::pair<double, double> RebaseRatio(const RatioObservation& obs);

struct PlanOptions {
  TargetCount target_count = TargetCount::kClients;
  // Largest per-round change of v; <= 0 disables the clamp.
  int max_step = 1;
  std::uint64_t seed = 0;
};

// A plan with the same v for every client, freshly partitioned.
SplitPlan MakeUniformPlan(std::span<const ClientDataset> clients, int v,
                          int round, std::uint64_t seed);

// Re-derives v from the last round's observation. The change is limited to
// options.max_step (when positive) and each client's v to [1, its sample
// count]. Clients whose v changes get a new random partition; the others
// keep theirs. Throws std::invalid_argument unless round > plan.round_set_at.
SplitPlan UpdatePlan(const SplitPlan& plan, const RatioObservation& obs,
                     std::span<const ClientDataset> clients, int round,
                     const PlanOptions& options);

bool PlanIsValid(const SplitPlan& plan, std::span<const ClientDataset> clients);

}  // namespace fedsplit

#endif  // FEDSPLIT_INTERMEDIARY_H_
