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

#ifndef FEDSPLIT_ACCOUNTANT_H_
#define FEDSPLIT_ACCOUNTANT_H_

#include <utility>

namespace fedsplit {

// Privacy accounting for the composed Gaussian mechanism at full
// participation. T rounds with per-round noise multiplier z compose to a
// single Gaussian mechanism with multiplier z / sqrt(T), whose exact (eps,
// delta) trade-off curve is
//
//   delta(eps) = Phi(1/(2 s) - eps s) - e^eps Phi(-1/(2 s) - eps s),  s = z/sqrt(T).
//
// Subsampling amplification is not credited: a run with sampling ratio q < 1
// reports the q = 1 budget, which is a valid upper bound.

struct PrivacyBudget {
  double epsilon = 0.0;
  double delta = 0.0;
  double z = 0.0;
  int rounds = 0;
  double sampling_ratio = 1.0;
};

// Standard normal CDF and its logarithm. LogNormalCdf stays accurate deep in
// the lower tail where Phi itself underflows.
double NormalCdf(double x);
double LogNormalCdf(double x);

// delta(eps) for a single Gaussian mechanism with noise multiplier
// `effective_z` (sensitivity 1, std effective_z). The e^eps factor is applied
// in the log domain so eps in the hundreds does not overflow.
double GaussianDelta(double effective_z, double epsilon);

// Smallest eps with delta(eps) <= delta for T-fold composition at multiplier
// z; found by bisection to 1e-12 relative. Returns 0 if delta(0) <= delta
// already. Throws std::invalid_argument unless z > 0, T >= 1 and
// 0 < delta < 1.
double EpsilonFor(double z, int rounds, double delta);

// Smallest z with EpsilonFor(z, T, delta) <= target_epsilon. Throws
// std::invalid_argument for target_epsilon <= 0 and std::runtime_error if the
// search cannot bracket the root.
double CalibrateZ(double target_epsilon, int rounds, double delta);

// 10^-k for the smallest integer k >= 0 with 10^-k <= 1/n.
double DeltaRule(int n_clients);

// (n eps, delta * sum_{i<n} e^{i eps}): the guarantee a mechanism that is
// (eps, delta)-DP per sub-client gives a whole client split into n parts.
//
// Note: the commonly quoted closed form delta (1 - eps^n) / (1 - eps) does
// not follow from the chaining argument, which multiplies each step's delta
// by e^{eps} per remaining hop. This function returns the chained sum.
std::pair<double, double> GroupPrivacy(double epsilon, double delta, int n);

// Advanced composition (Kairouz, Oh, Viswanath) over k mechanisms, each
// (eps, delta)-DP, with slack d in [0, 1]:
//   eps' = min{ k eps,
//               k eps (e^eps - 1)/(e^eps + 1) + eps sqrt(2k ln(e + sqrt(k eps^2)/d)),
//               k eps (e^eps - 1)/(e^eps + 1) + eps sqrt(2k ln(1/d)) }
//   delta' = 1 - (1 - delta)^k (1 - d)
// The d-dependent branches are +inf when d == 0.
std::pair<double, double> CompositionBound(double epsilon, double delta, int k,
                                           double d);

// eps * sqrt(T): the growth envelope of the moments accountant over T steps.
double MomentAccountantAsymptotic(double epsilon_step, int steps);

// Budget of a run: EpsilonFor at the run's z, rounds and delta. z == 0 gives
// eps = +inf.
PrivacyBudget BudgetFor(double z, int rounds, double delta,
                        double sampling_ratio = 1.0);

}  // namespace fedsplit

#endif  // FEDSPLIT_ACCOUNTANT_H_
