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

#include "fedsplit/accountant.h"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace fedsplit {
namespace {

constexpr double kBisectionRelTol = 1e-12;
constexpr int kMaxBracketSteps = 200;

void CheckDelta(double delta) {
  if (!(delta > 0.0 && delta < 1.0)) {
    throw std::invalid_argument("delta must lie in (0, 1), got " +
                                std::to_string(delta));
  }
}

}  // namespace

double NormalCdf(double x) {
  return 0.5 * std::erfc(-x / std::numbers::sqrt2);
}

double LogNormalCdf(double x) {
  if (x > -30.0) return std::log(NormalCdf(x));
  // Asymptotic expansion of the Mills ratio; at x <= -30 the truncated series
  // is exact to well below double precision.
  const double x2 = x * x;
  const double inv = 1.0 / x2;
  const double series =
      1.0 - inv * (1.0 - 3.0 * inv * (1.0 - 5.0 * inv * (1.0 - 7.0 * inv)));
  return -0.5 * x2 - std::log(-x) - 0.5 * std::log(2.0 * std::numbers::pi) +
         std::log(series);
}

double GaussianDelta(double effective_z, double epsilon) {
  const double a = 1.0 / (2.0 * effective_z);
  const double b = epsilon * effective_z;
  const double first = NormalCdf(a - b);
  const double second = std::exp(epsilon + LogNormalCdf(-a - b));
  return first - second;
}

double EpsilonFor(double z, int rounds, double delta) {
  if (!(z > 0.0) || !std::isfinite(z)) {
    throw std::invalid_argument("EpsilonFor: z must be positive");
  }
  if (rounds < 1) throw std::invalid_argument("EpsilonFor: rounds must be >= 1");
  CheckDelta(delta);
  const double s = z / std::sqrt(static_cast<double>(rounds));
  if (GaussianDelta(s, 0.0) <= delta) return 0.0;

  double lo = 0.0;
  double hi = 1.0;
  int steps = 0;
  while (GaussianDelta(s, hi) > delta) {
    lo = hi;
    hi *= 2.0;
    if (++steps > kMaxBracketSteps) {
      throw std::runtime_error("EpsilonFor: failed to bracket epsilon");
    }
  }
  while (hi - lo > kBisectionRelTol * hi) {
    const double mid = 0.5 * (lo + hi);
    if (GaussianDelta(s, mid) > delta) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return hi;
}

double CalibrateZ(double target_epsilon, int rounds, double delta) {
  if (!(target_epsilon > 0.0) || !std::isfinite(target_epsilon)) {
    throw std::invalid_argument("CalibrateZ: target epsilon must be positive");
  }
  if (rounds < 1) throw std::invalid_argument("CalibrateZ: rounds must be >= 1");
  CheckDelta(delta);

  // EpsilonFor is decreasing in z: find hi with eps(hi) <= target and lo with
  // eps(lo) > target.
  double hi = 1.0;
  int steps = 0;
  while (EpsilonFor(hi, rounds, delta) > target_epsilon) {
    hi *= 2.0;
    if (++steps > kMaxBracketSteps) {
      throw std::runtime_error("CalibrateZ: upper bracket not found");
    }
  }
  double lo = hi;
  steps = 0;
  while (EpsilonFor(lo, rounds, delta) <= target_epsilon) {
    lo *= 0.5;
    if (++steps > kMaxBracketSteps || lo < 1e-12) {
      throw std::runtime_error("CalibrateZ: lower bracket not found");
    }
  }
  while (hi - lo > kBisectionRelTol * hi) {
    const double mid = 0.5 * (lo + hi);
    if (EpsilonFor(mid, rounds, delta) > target_epsilon) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return hi;
}

double DeltaRule(int n_clients) {
  if (n_clients < 1) throw std::invalid_argument("DeltaRule: n must be >= 1");
  double power = 1.0;
  while (power < static_cast<double>(n_clients)) power *= 10.0;
  return 1.0 / power;
}

std::pair<double, double> GroupPrivacy(double epsilon, double delta, int n) {
  if (n < 1) throw std::invalid_argument("GroupPrivacy: n must be >= 1");
  double factor = 0.0;
  for (int i = 0; i < n; ++i) factor += std::exp(i * epsilon);
  return {n * epsilon, delta * factor};
}

std::pair<double, double> CompositionBound(double epsilon, double delta, int k,
                                           double d) {
  if (k < 1) throw std::invalid_argument("CompositionBound: k must be >= 1");
  if (!(d >= 0.0 && d <= 1.0)) {
    throw std::invalid_argument("CompositionBound: d must lie in [0, 1]");
  }
  const double kd = static_cast<double>(k);
  const double inf = std::numeric_limits<double>::infinity();
  const double basic = kd * epsilon;
  const double drift =
      (std::expm1(epsilon) * epsilon * kd) / (std::exp(epsilon) + 1.0);
  double second = inf;
  double third = inf;
  if (d > 0.0) {
    second = drift +
             epsilon * std::sqrt(2.0 * kd *
                                 std::log(std::numbers::e +
                                          std::sqrt(kd * epsilon * epsilon) / d));
    third = drift + epsilon * std::sqrt(2.0 * kd * std::log(1.0 / d));
  }
  const double eps_out = std::min({basic, second, third});
  // 1 - (1 - delta)^k (1 - d), evaluated without cancellation for small
  // delta and d.
  const double delta_out =
      d < 1.0 ? -std::expm1(kd * std::log1p(-delta) + std::log1p(-d)) : 1.0;
  return {eps_out, delta_out};
}

double MomentAccountantAsymptotic(double epsilon_step, int steps) {
  if (steps < 1) throw std::invalid_argument("steps must be >= 1");
  return epsilon_step * std::sqrt(static_cast<double>(steps));
}

PrivacyBudget BudgetFor(double z, int rounds, double delta,
                        double sampling_ratio) {
  PrivacyBudget b;
  b.z = z;
  b.rounds = rounds;
  b.delta = delta;
  b.sampling_ratio = sampling_ratio;
  b.epsilon = z > 0.0 ? EpsilonFor(z, rounds, delta)
                      : std::numeric_limits<double>::infinity();
  return b;
}

}  // namespace fedsplit
