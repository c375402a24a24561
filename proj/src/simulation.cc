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

#include "fedsplit/simulation.h"

#include <algorithm>
#include <limits>
#include <stdexcept>

#include "fedsplit/accountant.h"

namespace fedsplit {
namespace {

std::vector<Participant> BuildParticipants(const SplitPlan& plan,
                                           const SimulationData& data) {
  std::vector<Participant> out;
  int id = 0;
  for (std::size_t c = 0; c < data.train.size(); ++c) {
    for (const auto& shard : plan.partitions[c].shards) {
      out.push_back({id++, Shard(data.train[c], shard)});
    }
  }
  return out;
}

int UniformV(const SplitPlan& plan) {
  return *std::max_element(plan.v_per_client.begin(), plan.v_per_client.end());
}

}  // namespace

SimulationData MakeSimulationData(const std::vector<ClientDataset>& clients,
                                  double test_fraction, std::uint64_t seed) {
  SimulationData out;
  for (const ClientDataset& c : clients) {
    HoldoutResult h = HoldoutSplit(c, test_fraction, seed);
    out.train.push_back(std::move(h.train));
    out.test.push_back(std::move(h.test));
  }
  return out;
}

RunTrace RunSimulation(const SimulationData& data, const SimulationConfig& cfg) {
  if (data.train.empty()) throw std::invalid_argument("no training clients");
  return RunSimulation(data, Model::Logistic(data.train.front().feature_dim()),
                       cfg);
}

RunTrace RunSimulation(const SimulationData& data, const Model& model,
                       const SimulationConfig& cfg) {
  if (data.train.empty()) throw std::invalid_argument("no training clients");
  if (cfg.rounds < 1) throw std::invalid_argument("rounds must be >= 1");
  if (cfg.fixed_v < 1) throw std::invalid_argument("fixed_v must be >= 1");

  const int initial_v = cfg.adaptive ? 1 : cfg.fixed_v;
  SplitPlan plan = MakeUniformPlan(data.train, initial_v, 0, cfg.fed.seed);
  ServerState state = ServerState::Init(model.theta, cfg.fed);
  PlanOptions plan_options;
  plan_options.target_count = cfg.target_count;
  plan_options.seed = cfg.fed.seed;

  RunTrace trace;
  trace.reports.reserve(static_cast<std::size_t>(cfg.rounds));
  for (int t = 1; t <= cfg.rounds; ++t) {
    const std::vector<Participant> participants = BuildParticipants(plan, data);
    RoundInputs inputs{participants, plan.v_per_client, data.train, data.test};
    RoundResult result = RunRound(state, model, inputs, cfg.fed);
    state = std::move(result.state);

    trace.epsilon_so_far.push_back(
        cfg.fed.z > 0.0 ? EpsilonFor(cfg.fed.z, t, cfg.delta)
                        : std::numeric_limits<double>::infinity());

    if (cfg.adaptive && t < cfg.rounds) {
      const RoundReport& r = result.report;
      RatioObservation obs{r.xi, r.phi, r.lambda, UniformV(plan)};
      ControllerStep step;
      step.round = t;
      step.v_before = obs.v_current;
      if (r.phi > 0.0) {
        const auto [xi_base, phi_base] = RebaseRatio(obs);
        const int n = cfg.target_count == TargetCount::kClients
                          ? static_cast<int>(data.train.size())
                          : plan.total_participants;
        step.v_target = TargetV(n, xi_base, phi_base);
        plan_options.max_step = t == 1 ? 0 : 1;
        plan = UpdatePlan(plan, obs, data.train, t, plan_options);
      } else {
        step.v_target = obs.v_current;
      }
      step.v_after = UniformV(plan);
      step.clamped = step.v_after != step.v_target;
      trace.controller.push_back(step);
    }
    trace.reports.push_back(std::move(result.report));
  }
  trace.final_theta = state.theta;
  return trace;
}

}  // namespace fedsplit
