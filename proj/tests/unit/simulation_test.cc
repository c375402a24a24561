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

#include <cmath>
#include <cstdlib>

#include <gtest/gtest.h>

#include "fedsplit/accountant.h"

namespace fedsplit {
namespace {

SimulationData SmallData(int clients = 4) {
  return MakeSimulationData(GenerateFederation(clients, 100, 10, 0.3, 11), 0.2,
                            5);
}

SimulationConfig SmallConfig() {
  SimulationConfig cfg;
  cfg.rounds = 12;
  cfg.fed.z = 0.5;
  cfg.fed.seed = 3;
  cfg.fed.local.eta = 0.05;
  cfg.fed.local.batch_size = 8;
  cfg.delta = 0.1;
  return cfg;
}

TEST(RunSimulation, ReportsAndEpsilon) {
  const SimulationData data = SmallData();
  const SimulationConfig cfg = SmallConfig();
  const RunTrace trace = RunSimulation(data, cfg);
  ASSERT_EQ(trace.reports.size(), 12u);
  ASSERT_EQ(trace.epsilon_so_far.size(), 12u);
  EXPECT_TRUE(trace.controller.empty());
  for (std::size_t t = 0; t < trace.reports.size(); ++t) {
    const RoundReport& r = trace.reports[t];
    EXPECT_EQ(r.round, static_cast<int>(t) + 1);
    EXPECT_EQ(r.n_participants, 4);
    EXPECT_EQ(r.v_per_client, std::vector<int>(4, 1));
    EXPECT_GT(r.C, 0.0);
    if (t > 0) {
      EXPECT_GT(trace.epsilon_so_far[t], trace.epsilon_so_far[t - 1]);
    }
  }
  EXPECT_DOUBLE_EQ(trace.epsilon_so_far.back(), EpsilonFor(0.5, 12, 0.1));
}

TEST(RunSimulation, NonPrivateEpsilonIsInfinite) {
  SimulationConfig cfg = SmallConfig();
  cfg.fed.z = 0.0;
  cfg.rounds = 3;
  const RunTrace trace = RunSimulation(SmallData(), cfg);
  for (double e : trace.epsilon_so_far) EXPECT_TRUE(std::isinf(e));
  for (const RoundReport& r : trace.reports) EXPECT_EQ(r.xi, 0.0);
}

TEST(RunSimulation, FixedVUsesThatManyParticipants) {
  SimulationConfig cfg = SmallConfig();
  cfg.fixed_v = 3;
  cfg.rounds = 2;
  const RunTrace trace = RunSimulation(SmallData(), cfg);
  for (const RoundReport& r : trace.reports) {
    EXPECT_EQ(r.n_participants, 12);
    EXPECT_EQ(r.v_per_client, std::vector<int>(4, 3));
  }
}

TEST(RunSimulation, Deterministic) {
  const SimulationData data = SmallData();
  SimulationConfig cfg = SmallConfig();
  cfg.adaptive = true;
  const RunTrace a = RunSimulation(data, cfg);
  cfg.fed.threads = 3;
  const RunTrace b = RunSimulation(data, cfg);
  EXPECT_EQ(a.final_theta, b.final_theta);
  for (std::size_t t = 0; t < a.reports.size(); ++t) {
    EXPECT_EQ(a.reports[t].xi, b.reports[t].xi);
    EXPECT_EQ(a.reports[t].phi, b.reports[t].phi);
    EXPECT_EQ(a.reports[t].test_acc, b.reports[t].test_acc);
  }
}

TEST(RunSimulation, ControllerJumpsOnceThenClamps) {
  SimulationConfig cfg = SmallConfig();
  cfg.adaptive = true;
  cfg.rounds = 20;
  const RunTrace trace = RunSimulation(SmallData(), cfg);
  ASSERT_EQ(trace.controller.size(), 19u);
  EXPECT_EQ(trace.reports[0].v_per_client, std::vector<int>(4, 1));
  const ControllerStep& first = trace.controller[0];
  EXPECT_EQ(first.round, 1);
  EXPECT_EQ(first.v_before, 1);
  EXPECT_EQ(first.v_after, std::min(first.v_target, 80));
  for (std::size_t k = 1; k < trace.controller.size(); ++k) {
    const ControllerStep& s = trace.controller[k];
    EXPECT_LE(std::abs(s.v_after - s.v_before), 1);
    EXPECT_EQ(s.clamped, s.v_after != s.v_target);
    EXPECT_EQ(s.v_before, trace.controller[k - 1].v_after);
    EXPECT_EQ(trace.reports[k].v_per_client, std::vector<int>(4, s.v_before));
  }
}

TEST(RunSimulation, NoiseLevelShrinksWithV) {
  const SimulationData data = SmallData();
  SimulationConfig cfg = SmallConfig();
  cfg.rounds = 6;
  double xi[2] = {0.0, 0.0};
  for (int k = 0; k < 2; ++k) {
    cfg.fixed_v = k + 1;
    const RunTrace trace = RunSimulation(data, cfg);
    for (const RoundReport& r : trace.reports) xi[k] += r.xi;
  }
  EXPECT_GT(xi[1] / xi[0], 0.35);
  EXPECT_LT(xi[1] / xi[0], 0.65);
}

TEST(RunSimulation, Errors) {
  SimulationConfig cfg = SmallConfig();
  cfg.rounds = 0;
  EXPECT_THROW(RunSimulation(SmallData(), cfg), std::invalid_argument);
  cfg = SmallConfig();
  cfg.fixed_v = 0;
  EXPECT_THROW(RunSimulation(SmallData(), cfg), std::invalid_argument);
  EXPECT_THROW(RunSimulation(SimulationData{}, SmallConfig()),
               std::invalid_argument);
}

// A federation of N clients with v intermediaries each is the same
// computation as a federation of N * v clients holding the shards.
TEST(Equivalence, IntermediariesMatchMaterializedClients) {
  const SimulationData data = SmallData(3);
  const int v = 3;
  const SplitPlan plan = MakeUniformPlan(data.train, v, 0, 9);

  std::vector<ClientDataset> materialized;
  std::vector<Participant> split_participants;
  int id = 0;
  for (std::size_t c = 0; c < data.train.size(); ++c) {
    const auto shards = MaterializeShards(
        data.train[c], plan.partitions[c],
        static_cast<int>(materialized.size()));
    materialized.insert(materialized.end(), shards.begin(), shards.end());
    for (const auto& s : plan.partitions[c].shards) {
      split_participants.push_back({id++, Shard(data.train[c], s)});
    }
  }
  std::vector<Participant> client_participants;
  for (std::size_t i = 0; i < materialized.size(); ++i) {
    client_participants.push_back(
        {static_cast<int>(i), Shard(materialized[i])});
  }
  ASSERT_EQ(client_participants.size(), split_participants.size());

  FederationConfig fed = SmallConfig().fed;
  const Model model = Model::Logistic(10);
  ServerState a = ServerState::Init(model.theta, fed);
  ServerState b = a;
  const std::vector<int> v_split(3, v);
  const std::vector<int> v_clients(materialized.size(), 1);
  for (int t = 0; t < 8; ++t) {
    RoundResult ra = RunRound(
        a, model, {split_participants, v_split, data.train, data.test}, fed);
    RoundResult rb = RunRound(
        b, model, {client_participants, v_clients, data.train, data.test}, fed);
    ASSERT_EQ(ra.state.theta, rb.state.theta) << "round " << t + 1;
    EXPECT_EQ(ra.report.xi, rb.report.xi);
    EXPECT_EQ(ra.report.phi, rb.report.phi);
    EXPECT_EQ(ra.report.C, rb.report.C);
    a = std::move(ra.state);
    b = std::move(rb.state);
  }
}

}  // namespace
}  // namespace fedsplit
