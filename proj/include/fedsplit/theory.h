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

#ifndef FEDSPLIT_THEORY_H_
#define FEDSPLIT_THEORY_H_

#include <cstddef>
#include <vector>

#include "fedsplit/paramvec.h"
#include "fedsplit/synthdata.h"

namespace fedsplit {

// Executable forms of the DP-SGD cumulation results: how far sample-level
// noise drives a trained model from its noiseless twin.

// Closed form of x_t = a x_{t-1} + b with x_0 = 0: (a^t - 1)/(a - 1) b.
// Throws std::invalid_argument for a == 1 (the solution is then t b).
double GeometricRecurrence(double a, double b, int t);

// Upper bound 2 eta t c on the l2 sensitivity of theta_t under clipped SGD.
double SensitivityBound(int t, double eta, double c);

struct ConvexSpec {
  double mu = 1.0;
  double beta = 1.0;
  double eta = 0.1;
  double sigma = 1.0;
  int K = 1;
  int steps = 50;
  // Parameter dimension for the Monte Carlo. The bound treats E||N_t||^2 as
  // sigma^2 in total, which matches the simulation only at dim = 1; at
  // higher dims the simulated variance is dim times larger.
  std::size_t dim = 1;

  // a = 1 - 2 eta beta + eta^2 mu^2.
  double RateBase() const;
};

// Throws std::invalid_argument on an invalid spec (non-positive constants,
// beta < mu, K < 1).
void ValidateSpec(const ConvexSpec& spec);

// Lower bound on E||theta~_{t+1} - theta_{t+1}||^2:
//   [(a^{t+1} - 1) eta^2 sigma^2] / [(eta^2 mu^2 - 2 eta beta) K^2].
// Throws std::invalid_argument when eta^2 mu^2 - 2 eta beta == 0.
double VarianceLowerBound(const ConvexSpec& spec, int t);

struct DivergencePoint {
  // Number of descents taken.
  int t = 0;
  double estimate = 0.0;
  // 95% normal-approximation half-width of the estimate.
  double ci_half_width = 0.0;
};

// Paired noisy/noiseless full-batch gradient descent on the quadratic loss
// (mu/2)||theta - x||^2 over K fixed samples, starting from the same point;
// the noisy run adds (eta/K) N(0, sigma^2 I) per step. Returns points for
// t = 0..spec.steps. Throws std::invalid_argument for trials < 100.
std::vector<DivergencePoint> MonteCarloDivergence(const ConvexSpec& spec,
                                                  int trials,
                                                  std::uint64_t seed);

// Noiseless per-sample-clipped full-batch SGD on the quadratic loss with
// curvature mu; returns theta_0..theta_steps.
std::vector<ParamVector> ClippedSgdTrajectory(const ParamVector& theta0,
                                              std::span<const Sample> data,
                                              double mu, double eta, double c,
                                              int steps);

struct SensitivityCheck {
  // max over adjacent datasets of ||theta_t(d) - theta_t(d')|| per t.
  std::vector<double> empirical;
  std::vector<double> bound;
  int neighbours = 0;
  bool holds = true;
};

// Enumerates every dataset adjacent to `data` by replacing one sample with
// one element of `pool`, runs ClippedSgdTrajectory on each and compares the
// worst deviation at every step with SensitivityBound.
SensitivityCheck CheckSensitivity(const ParamVector& theta0,
                                  std::span<const Sample> data,
                                  std::span<const Sample> pool, double mu,
                                  double eta, double c, int steps);

// Log-log slope of the std of sum_{s<T} N_s (N_s ~ N(0, sigma^2)) against T
// over the given horizons, estimated from `trials` Monte Carlo sums.
double NoiseCumulationSlope(std::span<const int> horizons, int trials,
                            double sigma, std::uint64_t seed);

}  // namespace fedsplit

#endif  // FEDSPLIT_THEORY_H_
