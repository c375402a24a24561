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

#ifndef FEDSPLIT_DPMECH_H_
#define FEDSPLIT_DPMECH_H_

#include <span>
#include <vector>

#include "fedsplit/localtrain.h"
#include "fedsplit/paramvec.h"

namespace fedsplit {

// Adaptive clip-bound state. The bound follows the gamma-quantile of update
// norms by geometric steps: C <- C * exp(-eta_c * (b - gamma)), where b is the
// (optionally noised) fraction of updates with norm <= C.
struct ClipState {
  double C = 1.0;
  double eta_c = 0.2;
  double gamma = 0.5;
  // Std of the Gaussian noise on the clipped-count; 0 disables it.
  double sigma_b = 0.0;
};

struct NoiseSpec {
  double z = 0.0;
  int n_participants = 1;

  // Per-coordinate std of the noise on the aggregated mean: z * C / N.
  double MeanStd(double C) const;
};

// Delta / max(||Delta|| / C, 1). Returned unchanged (bitwise) when already
// within the bound.
ParamVector ClipUpdate(const ParamVector& delta, double C);

// Multiplier for the update noise when the clipped-count is also noised:
// (z^-2 - (2 sigma_b)^-2)^(-1/2). Returns z when sigma_b == 0. Throws
// std::invalid_argument if 2 sigma_b <= z (the count would consume the whole
// budget).
double UpdateNoiseMultiplier(double z, double sigma_b);

struct AggregateResult {
  // (clipped_sum + noise) / N.
  ParamVector noisy_mean;
  ParamVector clipped_sum;
  // Sum-level Gaussian noise zeta ~ N(0, (z C)^2 I).
  ParamVector noise;
  std::vector<double> raw_norms;
  int n_participants = 0;
};

// Gaussian aggregation over every received packet. N is the number of
// packets; the noise multiplier is taken as given (callers apply
// UpdateNoiseMultiplier if they noise the clip quantile).
AggregateResult Aggregate(std::span<const UpdatePacket> updates, double C,
                          double z, RngStream& stream);

// One adaptive-clipping step from this round's raw (pre-clip) norms.
ClipState AdaptClip(const ClipState& state, std::span<const double> raw_norms,
                    RngStream& stream);

// Median of the norms (mean of the two middle values for even counts).
double MedianNorm(std::span<const double> norms);

}  // namespace fedsplit

#endif  // FEDSPLIT_DPMECH_H_
