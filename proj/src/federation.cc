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

#include "fedsplit/federation.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "fedsplit/accountant.h"
#include "fedsplit/parallel.h"

namespace fedsplit {

std::string_view OptimizerName(ServerOptimizer opt) {
  switch (opt) {
    case ServerOptimizer::kFedAvg:
      return "fedavg";
    case ServerOptimizer::kFedAdam:
      return "fedadam";
    case ServerOptimizer::kFedNova:
      return "fednova";
  }
  return "unknown";
}

ServerOptimizer ParseOptimizer(std::string_view name) {
  for (auto opt : {ServerOptimizer::kFedAvg, ServerOptimizer::kFedAdam,
                   ServerOptimizer::kFedNova}) {
    if (OptimizerName(opt) == name) return opt;
  }
  throw std::invalid_argument("unknown optimizer '" + std::string(name) +
                              "' (expected fedavg, fedadam or fednova)");
}

ServerState ServerState::Init(ParamVector theta, const FederationConfig& cfg) {
  ServerState s;
  const std::size_t dim = theta.dim();
  s.theta = std::move(theta);
  s.optimizer = cfg.optimizer;
  s.adam = cfg.adam;
  s.m = ParamVector(dim);
  s.v = ParamVector(dim);
  s.clip.eta_c = cfg.clip.eta_c;
  s.clip.gamma = cfg.clip.gamma;
  s.clip.sigma_b = cfg.clip.sigma_b;
  if (cfg.clip.initial_C) {
    if (!(*cfg.clip.initial_C > 0.0)) {
      throw std::invalid_argument("initial clip bound must be positive");
    }
    s.clip.C = *cfg.clip.initial_C;
    s.clip_initialized = true;
  }
  return s;
}

std::optional<double> NoiseLevel(const ParamVector& zeta,
                                 const ParamVector& clipped_sum) {
  CheckSameDim(zeta, clipped_sum, "NoiseLevel");
  const double denom = L2Norm(clipped_sum);
  if (denom < kRatioGuard) return std::nullopt;
  return L2Norm(zeta) / denom;
}

std::optional<double> DiversityLevel(std::span<const double> raw_norms,
                                     const ParamVector& clipped_sum) {
  if (raw_norms.empty()) {
    throw std::invalid_argument("DiversityLevel: no update norms");
  }
  const double denom = L2Norm(clipped_sum);
  if (denom < kRatioGuard) return std::nullopt;
  double total = 0.0;
  for (double n : raw_norms) total += n;
  return total / denom;
}

std::vector<UpdatePacket> NovaNormalize(std::span<const UpdatePacket> packets) {
  std::vector<UpdatePacket> out(packets.begin(), packets.end());
  if (out.empty()) return out;
  double tau_sum = 0.0;
  for (const auto& p : out) {
    if (p.local_steps <= 0) {
      throw std::invalid_argument("NovaNormalize: packet without local steps");
    }
    tau_sum += p.local_steps;
  }
  const double tau_eff = tau_sum / static_cast<double>(out.size());
  for (auto& p : out) {
    const double factor = tau_eff / static_cast<double>(p.local_steps);
    if (factor != 1.0) p.delta *= factor;
  }
  return out;
}

ServerState ServerStep(const ServerState& state, const ParamVector& noisy_mean) {
  CheckSameDim(state.theta, noisy_mean, "ServerStep");
  ServerState next = state;
  switch (state.optimizer) {
    case ServerOptimizer::kFedAvg:
    case ServerOptimizer::kFedNova:
      next.theta += noisy_mean;
      break;
    case ServerOptimizer::kFedAdam: {
      const FedAdamConfig& a = state.adam;
      for (std::size_t i = 0; i < next.theta.dim(); ++i) {
        const double g = -noisy_mean[i];
        next.m[i] = a.beta1 * state.m[i] + (1.0 - a.beta1) * g;
        next.v[i] = a.beta2 * state.v[i] + (1.0 - a.beta2) * g * g;
        next.theta[i] -= a.server_lr * next.m[i] / (std::sqrt(next.v[i]) + a.tau);
      }
      CheckFinite(next.theta, "ServerStep");
      break;
    }
  }
  return next;
}

std::vector<std::size_t> Subsample(std::size_t n, double ratio,
                                   RngStream& stream) {
  if (!(ratio > 0.0 && ratio <= 1.0)) {
    throw std::invalid_argument("Subsample: ratio must lie in (0, 1]");
  }
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  if (ratio == 1.0 || n == 0) return idx;
  const auto k = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::lround(ratio * static_cast<double>(n))));
  stream.Shuffle(idx);
  idx.resize(std::min(k, n));
  std::sort(idx.begin(), idx.end());
  return idx;
}

std::optional<double> Auc(std::span<const double> scores,
                          std::span<const double> labels) {
  if (scores.size() != labels.size()) {
    throw std::invalid_argument("Auc: scores and labels differ in length");
  }
  // Sort by score and credit each positive with the negatives ranked below
  // it; tied groups share credit 1/2 per pair.
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });
  double pos = 0.0;
  double neg = 0.0;
  double credit = 0.0;
  double neg_below = 0.0;
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    double group_pos = 0.0;
    double group_neg = 0.0;
    while (j < order.size() && scores[order[j]] == scores[order[i]]) {
      if (labels[order[j]] > 0.5) {
        group_pos += 1.0;
      } else {
        group_neg += 1.0;
      }
      ++j;
    }
    credit += group_pos * neg_below + 0.5 * group_pos * group_neg;
    neg_below += group_neg;
    pos += group_pos;
    neg += group_neg;
    i = j;
  }
  if (pos == 0.0 || neg == 0.0) return std::nullopt;
  return credit / (pos * neg);
}

EvalResult Evaluate(const Model& model,
                    std::span<const ClientDataset> test_sets) {
  if (model.kind != ModelKind::kLogistic) {
    throw std::invalid_argument("Evaluate: only logistic models are scored");
  }
  std::vector<double> scores;
  std::vector<double> labels;
  double loss = 0.0;
  std::size_t correct = 0;
  for (const ClientDataset& set : test_sets) {
    for (const Sample& s : set.samples) {
      const double score = Score(model, s.features);
      const bool predicted = Sigmoid(score) >= 0.5;
      if (predicted == (s.label > 0.5)) ++correct;
      loss += SampleLoss(model, s);
      scores.push_back(score);
      labels.push_back(s.label);
    }
  }
  if (scores.empty()) throw std::invalid_argument("Evaluate: empty test set");
  EvalResult r;
  const double n = static_cast<double>(scores.size());
  r.acc = static_cast<double>(correct) / n;
  r.loss = loss / n;
  if (auto auc = Auc(scores, labels)) {
    r.auc = *auc;
  } else {
    r.auc = 0.5;
    r.auc_defined = false;
  }
  return r;
}

RoundResult RunRound(const ServerState& state, const Model& model_template,
                     const RoundInputs& inputs, const FederationConfig& cfg) {
  if (inputs.participants.empty()) {
    throw std::invalid_argument("RunRound: no participants");
  }
  const int t = state.round + 1;
  const auto round_key = static_cast<std::uint64_t>(t);

  // Subsampling acts on clients; a selected client brings all its shards.
  std::vector<int> clients;
  for (const auto& p : inputs.participants) {
    if (std::find(clients.begin(), clients.end(), p.shard.parent_client_id()) ==
        clients.end()) {
      clients.push_back(p.shard.parent_client_id());
    }
  }
  RngStream subsample_rng(cfg.seed, kSubsampleStream, round_key);
  std::vector<int> selected;
  for (std::size_t i : Subsample(clients.size(), cfg.subsample_ratio,
                                 subsample_rng)) {
    selected.push_back(clients[i]);
  }
  std::vector<std::size_t> active;
  for (std::size_t i = 0; i < inputs.participants.size(); ++i) {
    const int parent = inputs.participants[i].shard.parent_client_id();
    if (std::find(selected.begin(), selected.end(), parent) != selected.end()) {
      active.push_back(i);
    }
  }

  Model global = model_template;
  global.theta = state.theta;

  std::vector<UpdatePacket> packets(active.size());
  ParallelFor(active.size(), cfg.threads, [&](std::size_t k) {
    const std::size_t pos = active[k];
    const Participant& p = inputs.participants[pos];
    RngStream rng(cfg.seed, kParticipantStreamBase + pos, round_key);
    packets[k] = LocalUpdate(global, p.shard, cfg.local, rng);
    packets[k].participant_id = p.participant_id;
  });
  if (cfg.optimizer == ServerOptimizer::kFedNova) {
    packets = NovaNormalize(packets);
  }

  ServerState next = state;
  if (!next.clip_initialized) {
    std::vector<double> norms;
    for (const auto& p : packets) norms.push_back(L2Norm(p.delta));
    next.clip.C = MedianNorm(norms);
    if (!(next.clip.C > 0.0)) next.clip.C = 1.0;
    next.clip_initialized = true;
  }

  const double z_update = cfg.clip.adaptive
                              ? UpdateNoiseMultiplier(cfg.z, cfg.clip.sigma_b)
                              : cfg.z;
  RngStream noise_rng(cfg.seed, kNoiseStream, round_key);
  AggregateResult agg = Aggregate(packets, next.clip.C, z_update, noise_rng);

  RoundReport report;
  report.round = t;
  report.C = next.clip.C;
  report.n_participants = agg.n_participants;
  report.v_per_client.assign(inputs.v_per_client.begin(),
                             inputs.v_per_client.end());
  const auto xi = NoiseLevel(agg.noise, agg.clipped_sum);
  const auto phi = DiversityLevel(agg.raw_norms, agg.clipped_sum);
  if (xi && phi) {
    report.xi = *xi;
    report.phi = *phi;
    next.last_xi = *xi;
    next.last_phi = *phi;
  } else {
    report.xi = state.last_xi;
    report.phi = state.last_phi;
    report.guarded = true;
  }
  report.lambda = report.phi > 0.0 ? report.xi / report.phi : 0.0;

  next = ServerStep(next, agg.noisy_mean);
  next.round = t;
  if (cfg.clip.adaptive) {
    RngStream clip_rng(cfg.seed, kClipStream, round_key);
    next.clip = AdaptClip(next.clip, agg.raw_norms, clip_rng);
  }

  Model trained = model_template;
  trained.theta = next.theta;
  if (!inputs.test_sets.empty() && trained.kind == ModelKind::kLogistic) {
    const EvalResult eval = Evaluate(trained, inputs.test_sets);
    report.test_acc = eval.acc;
    report.test_auc = eval.auc;
    report.auc_defined = eval.auc_defined;
  }
  if (!inputs.train_sets.empty()) {
    double loss = 0.0;
    std::size_t count = 0;
    for (const ClientDataset& d : inputs.train_sets) {
      for (const Sample& s : d.samples) loss += SampleLoss(trained, s);
      count += d.size();
    }
    report.train_loss = count > 0 ? loss / static_cast<double>(count) : 0.0;
  }

  return {std::move(next), std::move(report), std::move(agg)};
}

}  // namespace fedsplit
