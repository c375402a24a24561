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

#ifndef FEDSPLIT_SIMULATION_H_
#define FEDSPLIT_SIMULATION_H_

#include <vector>

#include "fedsplit/federation.h"
#include "fedsplit/intermediary.h"
#include "fedsplit/localtrain.h"
#include "fedsplit/synthdata.h"

namespace fedsplit {

struct SimulationConfig {
  FederationConfig fed;
  int rounds = 100;
  // Adaptive intermediaries; when off every client keeps fixed_v shards.
  bool adaptive = false;
  int fixed_v = 1;
  TargetCount target_count = TargetCount::kClients;
  // delta used for the running epsilon; ignored when fed.z == 0.
  double delta = 1e-2;
};

// One controller decision, recorded after the round it observed.
struct ControllerStep {
  int round = 0;
  int v_before = 1;
  // sqrt(N xi/phi) rounded, before the per-round clamp.
  int v_target = 1;
  int v_after = 1;
  bool clamped = false;
};

struct RunTrace {
  std::vector<RoundReport> reports;
  // Composed epsilon after each round (+inf when z == 0).
  std::vector<double> epsilon_so_far;
  std::vector<ControllerStep> controller;
  ParamVector final_theta{std::size_t{1}};
};

struct SimulationData {
  std::vector<ClientDataset> train;
  std::vector<ClientDataset> test;
};

// Splits each generated client into train/test with HoldoutSplit.
SimulationData MakeSimulationData(const std::vector<ClientDataset>& clients,
                                  double test_fraction, std::uint64_t seed);

// Runs cfg.rounds rounds of federated training of a logistic model starting
// at theta = 0. With adaptive intermediaries the first round runs at v = 1;
// its measurement sets v without the per-round clamp, later rounds move v by
// at most one.
RunTrace RunSimulation(const SimulationData& data, const SimulationConfig& cfg);

// Same loop for an explicit model template (theta is the starting point).
RunTrace RunSimulation(const SimulationData& data, const Model& model,
                       const SimulationConfig& cfg);

}  // namespace fedsplit

#endif  // FEDSPLIT_SIMULATION_H_
