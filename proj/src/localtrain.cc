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

#include "fedsplit/localtrain.h"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace fedsplit {
namespace {

void ValidateLocalConfig(const LocalConfig& cfg) {
  if (!(cfg.eta > 0.0) || !std::isfinite(cfg.eta)) {
    throw std::invalid_argument("LocalConfig: eta must be positive");
  }
  if (cfg.epochs < 0) {
    throw std::invalid_argument("LocalConfig: epochs must be >= 0");
  }
  if (cfg.batch_size == 0) {
    throw std::invalid_argument("LocalConfig: batch_size must be positive");
  }
}

// log(1 + exp(z)) without overflow.
double Softplus(double z) {
  return z > 0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
}

}  // namespace

double Sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

Model Model::Logistic(std::size_t feature_dim) {
  Model m;
  m.kind = ModelKind::kLogistic;
  m.theta = ParamVector(feature_dim + 1);
  m.center = ParamVector(feature_dim + 1);
  return m;
}

Model Model::Quadratic(ParamVector center, double mu) {
  if (!(mu >= 0.0)) throw std::invalid_argument("Quadratic: mu must be >= 0");
  Model m;
  m.kind = ModelKind::kQuadratic;
  m.theta = center;
  m.center = std::move(center);
  m.mu = mu;
  m.beta = mu;
  return m;
}

double Score(const Model& model, const ParamVector& features) {
  const std::size_t d = features.dim();
  if (model.theta.dim() != d + 1) {
    throw std::invalid_argument("Score: feature/model dimension mismatch");
  }
  double s = model.theta[d];
  double dot = 0.0;
  for (std::size_t i = 0; i < d; ++i) dot += model.theta[i] * features[i];
  return s + dot;
}

ParamVector SampleGradient(const Model& model, const Sample& sample) {
  switch (model.kind) {
    case ModelKind::kLogistic: {
      const double r = Sigmoid(Score(model, sample.features)) - sample.label;
      const std::size_t d = sample.features.dim();
      ParamVector g(d + 1);
      for (std::size_t i = 0; i < d; ++i) g[i] = r * sample.features[i];
      g[d] = r;
      return g;
    }
    case ModelKind::kQuadratic: {
      CheckSameDim(model.theta, sample.features, "SampleGradient");
      ParamVector g = model.theta - model.center;
      g -= sample.features;
      g *= model.mu;
      return g;
    }
  }
  throw std::logic_error("unknown model kind");
}

double SampleLoss(const Model& model, const Sample& sample) {
  switch (model.kind) {
    case ModelKind::kLogistic: {
      // BCE with logits: softplus(s) - y*s.
      const double s = Score(model, sample.features);
      return Softplus(s) - sample.label * s;
    }
    case ModelKind::kQuadratic: {
      ParamVector r = model.theta - model.center;
      r -= sample.features;
      return 0.5 * model.mu * SquaredNorm(r);
    }
  }
  throw std::logic_error("unknown model kind");
}

ParamVector Grad(const Model& model, std::span<const Sample> batch) {
  if (batch.empty()) throw std::invalid_argument("Grad: empty batch");
  ParamVector sum(model.dim());
  for (const Sample& s : batch) sum += SampleGradient(model, s);
  sum *= 1.0 / static_cast<double>(batch.size());
  return sum;
}

ParamVector Grad(const Model& model, const Shard& shard,
                 std::span<const std::size_t> positions) {
  if (positions.empty()) throw std::invalid_argument("Grad: empty batch");
  ParamVector sum(model.dim());
  for (std::size_t p : positions) sum += SampleGradient(model, shard[p]);
  sum *= 1.0 / static_cast<double>(positions.size());
  return sum;
}

double MeanLoss(const Model& model, const Shard& shard) {
  if (shard.empty()) throw std::invalid_argument("MeanLoss: empty shard");
  double total = 0.0;
  for (std::size_t i = 0; i < shard.size(); ++i) {
    total += SampleLoss(model, shard[i]);
  }
  return total / static_cast<double>(shard.size());
}

UpdatePacket LocalUpdate(const Model& model, const Shard& shard,
                         const LocalConfig& cfg, RngStream& stream) {
  ValidateLocalConfig(cfg);
  if (shard.empty()) throw std::invalid_argument("LocalUpdate: empty shard");

  Model local = model;
  std::vector<std::size_t> order(shard.size());
  int steps = 0;
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    stream.Shuffle(order);
    for (std::size_t start = 0; start < order.size(); start += cfg.batch_size) {
      const std::size_t len = std::min(cfg.batch_size, order.size() - start);
      const ParamVector g =
          Grad(local, shard, std::span(order).subspan(start, len));
      local.theta.AddScaled(-cfg.eta, g);
      ++steps;
    }
  }

  UpdatePacket packet;
  packet.parent_client_id = shard.parent_client_id();
  packet.delta = local.theta - model.theta;
  packet.local_steps = steps;
  packet.num_samples = shard.size();
  return packet;
}

ParamVector ClipToNorm(const ParamVector& g, double c) {
  if (!(c > 0.0)) throw std::invalid_argument("ClipToNorm: bound must be > 0");
  const double norm = L2Norm(g);
  if (norm <= c) return g;
  return (1.0 / (norm / c)) * g;
}

ParamVector DpSgdNoisyGradient(const Model& model, const Shard& shard,
                               const LocalConfig& cfg, RngStream& stream) {
  if (!cfg.dp) throw std::invalid_argument("DpSgd: dp config required");
  if (!(cfg.dp->c > 0.0)) throw std::invalid_argument("DpSgd: c must be > 0");
  if (!(cfg.dp->z >= 0.0)) throw std::invalid_argument("DpSgd: z must be >= 0");
  if (cfg.batch_size > shard.size()) {
    throw std::invalid_argument("DpSgd: batch size exceeds shard size");
  }
  const double keep = static_cast<double>(cfg.batch_size) /
                      static_cast<double>(shard.size());
  ParamVector sum(model.dim());
  for (std::size_t i = 0; i < shard.size(); ++i) {
    if (!stream.Bernoulli(keep)) continue;
    sum += ClipToNorm(SampleGradient(model, shard[i]), cfg.dp->c);
  }
  sum += GaussianSample(stream, model.dim(), cfg.dp->z * cfg.dp->c);
  sum *= 1.0 / static_cast<double>(cfg.batch_size);
  return sum;
}

Model DpSgdRound(const Model& model, const Shard& shard, const LocalConfig& cfg,
                 RngStream& stream) {
  ValidateLocalConfig(cfg);
  if (shard.empty()) throw std::invalid_argument("DpSgdRound: empty shard");
  if (cfg.batch_size > shard.size()) {
    throw std::invalid_argument("DpSgdRound: batch size exceeds shard size");
  }
  const std::size_t steps =
      (shard.size() + cfg.batch_size - 1) / cfg.batch_size;
  Model out = model;
  for (std::size_t t = 0; t < steps; ++t) {
    out.theta.AddScaled(-cfg.eta, DpSgdNoisyGradient(out, shard, cfg, stream));
  }
  return out;
}

}  // namespace fedsplit
