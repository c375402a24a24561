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

#ifndef FEDSPLIT_LOCALTRAIN_H_
#define FEDSPLIT_LOCALTRAIN_H_

#include <cstddef>
#include <optional>
#include <vector>

#include "fedsplit/paramvec.h"
#include "fedsplit/synthdata.h"

namespace fedsplit {

enum class ModelKind { kLogistic, kQuadratic };

// Two model families:
//
//   logistic:  theta = (w, b) with dim = feature_dim + 1, per-sample loss
//              BCE(sigmoid(w.x + b), y). Per-sample gradient norm is at most
//              ||(x, 1)||.
//   quadratic: per-sample loss (mu/2) ||theta - center - x||^2, where x is the
//              sample's features used as an offset. mu-convex and beta-smooth
//              with beta = mu; samples with zero features make `center` the
//              minimizer.
struct Model {
  ModelKind kind = ModelKind::kLogistic;
  ParamVector theta{std::size_t{1}};
  ParamVector center{std::size_t{1}};
  double mu = 0.0;
  double beta = 0.0;

  static Model Logistic(std::size_t feature_dim);
  static Model Quadratic(ParamVector center, double mu);

  std::size_t dim() const { return theta.dim(); }
};

struct DpSgdConfig {
  double z = 0.0;  // noise multiplier
  double c = 1.0;  // per-sample clip bound
};

struct LocalConfig {
  double eta = 0.1;
  int epochs = 1;
  std::size_t batch_size = 16;
  std::optional<DpSgdConfig> dp;
};

struct UpdatePacket {
  int participant_id = 0;
  int parent_client_id = 0;
  ParamVector delta{std::size_t{1}};
  int local_steps = 0;
  std::size_t num_samples = 0;
};

double Sigmoid(double z);

// Model score before the link: w.x + b for logistic.
double Score(const Model& model, const ParamVector& features);

ParamVector SampleGradient(const Model& model, const Sample& sample);
double SampleLoss(const Model& model, const Sample& sample);

// Mean per-sample gradient over a nonempty batch.
ParamVector Grad(const Model& model, std::span<const Sample> batch);
ParamVector Grad(const Model& model, const Shard& shard,
                 std::span<const std::size_t> positions);
double MeanLoss(const Model& model, const Shard& shard);

// Plain minibatch SGD from model.theta: each epoch reshuffles the shard and
// walks it in batches of batch_size (last batch may be short), for
// epochs * ceil(n / K) steps in total. delta = theta_local - theta_global.
// Throws std::invalid_argument for an empty shard.
UpdatePacket LocalUpdate(const Model& model, const Shard& shard,
                         const LocalConfig& cfg, RngStream& stream);

// g / max(1, ||g|| / c).
ParamVector ClipToNorm(const ParamVector& g, double c);

// One noisy DP-SGD descent direction at the current theta: a Poisson batch
// (each sample kept with probability K/N), per-sample clipping to c, and
// (sum of clipped + N(0, z^2 c^2 I)) / K.
ParamVector DpSgdNoisyGradient(const Model& model, const Shard& shard,
                               const LocalConfig& cfg, RngStream& stream);

// ceil(N / K) DP-SGD steps theta <- theta - eta * noisy_gradient.
// Throws std::invalid_argument when cfg.dp is absent, c <= 0, or K > N.
Model DpSgdRound(const Model& model, const Shard& shard, const LocalConfig& cfg,
                 RngStream& stream);

}  // namespace fedsplit

#endif  // FEDSPLIT_LOCALTRAIN_H_
