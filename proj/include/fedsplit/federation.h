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

#ifndef FEDSPLIT_FEDERATION_H_
#define FEDSPLIT_FEDERATION_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "fedsplit/dpmech.h"
#include "fedsplit/localtrain.h"
#include "fedsplit/paramvec.h"
#include "fedsplit/synthdata.h"

namespace fedsplit {

enum class ServerOptimizer { kFedAvg, kFedAdam, kFedNova };

std::string_view OptimizerName(ServerOptimizer opt);
// Throws std::invalid_argument for unknown names.
ServerOptimizer ParseOptimizer(std::string_view name);

struct FedAdamConfig {
  double server_lr = 1e-2;
  double beta1 = 0.9;
  double beta2 = 0.99;
  double tau = 1e-3;
};

struct ClipConfig {
  bool adaptive = true;
  // Unset: initialize from the median of the first round's raw norms.
  std::optional<double> initial_C;
  double eta_c = 0.2;
  double gamma = 0.5;
  double sigma_b = 0.0;
};

struct FederationConfig {
  LocalConfig local;
  double z = 0.0;
  ServerOptimizer optimizer = ServerOptimizer::kFedAvg;
  FedAdamConfig adam;
  ClipConfig clip;
  double subsample_ratio = 1.0;
  int threads = 1;
  std::uint64_t seed = 0;
};

struct ServerState {
  ParamVector theta{std::size_t{1}};
  int round = 0;
  ServerOptimizer optimizer = ServerOptimizer::kFedAvg;
  FedAdamConfig adam;
  // FedAdam first and second moments; same dim as theta.
  ParamVector m{std::size_t{1}};
  ParamVector v{std::size_t{1}};
  ClipState clip;
  bool clip_initialized = false;
  // Last unguarded noise and diversity levels, carried into guarded rounds.
  double last_xi = 0.0;
  double last_phi = 1.0;

  static ServerState Init(ParamVector theta, const FederationConfig& cfg);
};

struct RoundReport {
  int round = 0;
  double xi = 0.0;
  double phi = 0.0;
  double lambda = 0.0;
  double C = 0.0;
  std::vector<int> v_per_client;
  int n_participants = 0;
  double train_loss = 0.0;
  double test_acc = 0.0;
  double test_auc = 0.5;
  bool auc_defined = true;
  // xi/phi denominator vanished; xi and phi repeat the previous round's.
  bool guarded = false;
};

// Denominator below which the noise and diversity levels are undefined.
inline constexpr double kRatioGuard = 1e-12;

// RngStream ids used by RunRound, all keyed by (cfg.seed, id, round). The
// participant at position p of RoundInputs::participants trains with
// kParticipantStreamBase + p.
inline constexpr std::uint64_t kNoiseStream = 0xfed00001;
inline constexpr std::uint64_t kClipStream = 0xfed00002;
inline constexpr std::uint64_t kSubsampleStream = 0xfed00003;
inline constexpr std::uint64_t kParticipantStreamBase = 0x100000000ULL;

// ||zeta|| / ||sum of clipped updates||; nullopt when the denominator is
// below kRatioGuard.
std::optional<double> NoiseLevel(const ParamVector& zeta,
                                 const ParamVector& clipped_sum);
// sum of raw update norms / ||sum of clipped updates||; nullopt when the
// denominator is below kRatioGuard.
std::optional<double> DiversityLevel(std::span<const double> raw_norms,
                                     const ParamVector& clipped_sum);

// Rescales each packet by tau_eff / tau_i with tau_eff the mean local step
// count. Equal step counts leave packets bitwise unchanged.
std::vector<UpdatePacket> NovaNormalize(std::span<const UpdatePacket> packets);

// Applies the aggregated update. fedavg and fednova add it to theta; fedadam
// treats -noisy_mean as a pseudo-gradient for a server-side Adam step
// (no bias correction).
ServerState ServerStep(const ServerState& state, const ParamVector& noisy_mean);

// Uniform subset of {0..n-1} without replacement of size max(1,
// round(ratio * n)), returned in ascending order.
std::vector<std::size_t> Subsample(std::size_t n, double ratio,
                                   RngStream& stream);

struct EvalResult {
  double acc = 0.0;
  double auc = 0.5;
  bool auc_defined = true;
  double loss = 0.0;
};

// Rank-statistic AUC over all positive/negative pairs, ties counting 1/2.
// nullopt if either class is absent.
std::optional<double> Auc(std::span<const double> scores,
                          std::span<const double> labels);

// Logistic models only: accuracy at threshold 0.5, AUC and mean BCE over the
// pooled test sets.
EvalResult Evaluate(const Model& model, std::span<const ClientDataset> test_sets);

// One participant in a round: a shard of some client's training data.
struct Participant {
  int participant_id = 0;
  Shard shard;
};

struct RoundInputs {
  // All (sub-)participants of every client, in a fixed order.
  std::span<const Participant> participants;
  // Per-client v, copied into the report.
  std::span<const int> v_per_client;
  std::span<const ClientDataset> train_sets;
  std::span<const ClientDataset> test_sets;
};

struct RoundResult {
  ServerState state;
  RoundReport report;
  AggregateResult aggregate;
};

// Broadcast theta, local updates, clipping and noisy aggregation, server step,
// clip adaptation and evaluation. Randomness is keyed by (cfg.seed, purpose
// or participant position, round), so two participant lists that agree
// position by position produce identical results.
RoundResult RunRound(const ServerState& state, const Model& model_template,
                     const RoundInputs& inputs, const FederationConfig& cfg);

}  // namespace fedsplit

#endif  // FEDSPLIT_FEDERATION_H_
