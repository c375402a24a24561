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

#include "fedsplit/dpmech.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fedsplit {

double NoiseSpec::MeanStd(double C) const {
  if (n_participants < 1) {
    throw std::invalid_argument("NoiseSpec: n_participants must be >= 1");
  }
  return z * C / static_cast<double>(n_participants);
}

ParamVector ClipUpdate(const ParamVector& delta, double C) {
  if (!(C > 0.0)) throw std::invalid_argument("ClipUpdate: C must be > 0");
  const double norm = L2Norm(delta);
  const double ratio = norm / C;
  if (ratio <= 1.0) return delta;
  return (1.0 / ratio) * delta;
}

double UpdateNoiseMultiplier(double z, double sigma_b) {
  if (sigma_b == 0.0) return z;
  if (!(2.0 * sigma_b > z)) {
    throw std::invalid_argument(
        "noised clipping needs 2 * sigma_b > z to leave budget for updates");
  }
  return 1.0 / std::sqrt(1.0 / (z * z) - 1.0 / (4.0 * sigma_b * sigma_b));
}

AggregateResult Aggregate(std::span<const UpdatePacket> updates, double C,
                          double z, RngStream& stream) {
  if (updates.empty()) throw std::invalid_argument("Aggregate: no updates");
  if (!(C > 0.0)) throw std::invalid_argument("Aggregate: C must be > 0");
  if (!(z >= 0.0)) throw std::invalid_argument("Aggregate: z must be >= 0");
  const std::size_t dim = updates.front().delta.dim();

  AggregateResult out{ParamVector(dim), ParamVector(dim), ParamVector(dim),
                      {}, static_cast<int>(updates.size())};
  out.raw_norms.reserve(updates.size());
  // Index-ordered accumulation keeps the sum bitwise reproducible.
  for (const UpdatePacket& u : updates) {
    CheckSameDim(u.delta, out.clipped_sum, "Aggregate");
    out.raw_norms.push_back(L2Norm(u.delta));
    out.clipped_sum += ClipUpdate(u.delta, C);
  }
  out.noise = GaussianSample(stream, dim, z * C);
  out.noisy_mean = out.clipped_sum + out.noise;
  const double n = static_cast<double>(updates.size());
  for (double& v : out.noisy_mean.mutable_values()) v /= n;
  return out;
}

ClipState AdaptClip(const ClipState& state, std::span<const double> raw_norms,
                    RngStream& stream) {
  if (raw_norms.empty()) throw std::invalid_argument("AdaptClip: no norms");
  double below = 0.0;
  for (double n : raw_norms) {
    if (n <= state.C) below += 1.0;
  }
  if (state.sigma_b > 0.0) below += state.sigma_b * stream.Normal();
  const double fraction = below / static_cast<double>(raw_norms.size());
  ClipState next = state;
  next.C = state.C * std::exp(-state.eta_c * (fraction - state.gamma));
  return next;
}

double MedianNorm(std::span<const double> norms) {
  if (norms.empty()) throw std::invalid_argument("MedianNorm: no norms");
  std::vector<double> sorted(norms.begin(), norms.end());
  std::sort(sorted.begin(), sorted.end());
  const std::size_t mid = sorted.size() / 2;
  if (sorted.size() % 2 == 1) return sorted[mid];
  return 0.5 * (sorted[mid - 1] + sorted[mid]);
}

}  // namespace fedsplit
