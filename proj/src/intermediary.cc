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

#include "fedsplit/intermediary.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "fedsplit/paramvec.h"

namespace fedsplit {
namespace {

std::uint64_t PartitionSeed(std::uint64_t seed, int round) {
  return MixBits(seed ^ MixBits(static_cast<std::uint64_t>(round)));
}

int CountParticipants(const std::vector<int>& v) {
  int total = 0;
  for (int x : v) total += x;
  return total;
}

}  // namespace

int TargetV(int n, double xi_base, double phi_base) {
  if (n < 1) throw std::invalid_argument("TargetV: N must be >= 1");
  if (!(phi_base > 0.0)) throw std::invalid_argument("TargetV: phi must be > 0");
  if (!(xi_base >= 0.0)) throw std::invalid_argument("TargetV: xi must be >= 0");
  const double v = std::round(std::sqrt(n * xi_base / phi_base));
  if (!(v >= 1.0)) return 1;
  return static_cast<int>(std::min(v, 1e6));
}

std::pair<double, double> RebaseRatio(const RatioObservation& obs) {
  if (obs.v_current < 1) throw std::invalid_argument("RebaseRatio: v < 1");
  const double v = obs.v_current;
  return {v * obs.xi, obs.phi / v};
}

SplitPlan MakeUniformPlan(std::span<const ClientDataset> clients, int v,
                          int round, std::uint64_t seed) {
  SplitPlan plan;
  plan.round_set_at = round;
  const std::uint64_t split_seed = PartitionSeed(seed, round);
  for (const ClientDataset& c : clients) {
    const int vc = std::clamp(v, 1, static_cast<int>(c.size()));
    plan.v_per_client.push_back(vc);
    plan.partitions.push_back(SplitClient(c, vc, split_seed));
  }
  plan.total_participants = CountParticipants(plan.v_per_client);
  return plan;
}

SplitPlan UpdatePlan(const SplitPlan& plan, const RatioObservation& obs,
                     std::span<const ClientDataset> clients, int round,
                     const PlanOptions& options) {
  if (round <= plan.round_set_at) {
    throw std::invalid_argument("UpdatePlan: round must advance");
  }
  if (plan.v_per_client.size() != clients.size()) {
    throw std::invalid_argument("UpdatePlan: plan/client count mismatch");
  }
  const auto [xi_base, phi_base] = RebaseRatio(obs);
  const int n = options.target_count == TargetCount::kClients
                    ? static_cast<int>(clients.size())
                    : std::max(plan.total_participants, 1);
  int wanted = TargetV(n, xi_base, phi_base);
  if (options.max_step > 0) {
    wanted = std::clamp(wanted, obs.v_current - options.max_step,
                        obs.v_current + options.max_step);
  }
  wanted = std::max(wanted, 1);

  SplitPlan next = plan;
  next.round_set_at = round;
  const std::uint64_t split_seed = PartitionSeed(options.seed, round);
  for (std::size_t i = 0; i < clients.size(); ++i) {
    const int vc = std::min(wanted, static_cast<int>(clients[i].size()));
    if (vc != plan.v_per_client[i]) {
      next.v_per_client[i] = vc;
      next.partitions[i] = SplitClient(clients[i], vc, split_seed);
    }
  }
  next.total_participants = CountParticipants(next.v_per_client);
  return next;
}

bool PlanIsValid(const SplitPlan& plan, std::span<const ClientDataset> clients) {
  if (plan.partitions.size() != clients.size() ||
      plan.v_per_client.size() != clients.size()) {
    return false;
  }
  int total = 0;
  for (std::size_t i = 0; i < clients.size(); ++i) {
    const auto& part = plan.partitions[i];
    if (part.parent_client_id != clients[i].client_id) return false;
    if (static_cast<int>(part.v()) != plan.v_per_client[i]) return false;
    if (plan.v_per_client[i] < 1 ||
        plan.v_per_client[i] > static_cast<int>(clients[i].size())) {
      return false;
    }
    std::vector<int> seen(clients[i].size(), 0);
    for (const auto& shard : part.shards) {
      if (shard.empty()) return false;
      for (std::size_t idx : shard) {
        if (idx >= seen.size() || seen[idx]++ != 0) return false;
      }
    }
    if (std::find(seen.begin(), seen.end(), 0) != seen.end()) return false;
    total += plan.v_per_client[i];
  }
  return total == plan.total_participants;
}

}  // namespace fedsplit
