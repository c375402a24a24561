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

#include "fedsplit/theory.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "fedsplit/localtrain.h"

namespace fedsplit {
namespace {

constexpr std::uint64_t kDivergenceStream = 0x7e000001;
constexpr std::uint64_t kCumulationStream = 0x7e000002;

}  // namespace

double GeometricRecurrence(double a, double b, int t) {
  if (a == 1.0) {
    throw std::invalid_argument("GeometricRecurrence: a == 1, use x_t = t b");
  }
  if (t < 0) throw std::invalid_argument("GeometricRecurrence: t < 0");
  return (std::pow(a, t) - 1.0) / (a - 1.0) * b;
}

double SensitivityBound(int t, double eta, double c) {
  if (t < 0) throw std::invalid_argument("SensitivityBound: t < 0");
  return 2.0 * eta * t * c;
}

double ConvexSpec::RateBase() const {
  return 1.0 - 2.0 * eta * beta + eta * eta * mu * mu;
}

void ValidateSpec(const ConvexSpec& spec) {
  if (!(spec.mu > 0.0)) throw std::invalid_argument("spec: mu must be > 0");
  if (!(spec.beta >= spec.mu)) {
    throw std::invalid_argument("spec: beta must be >= mu");
  }
  if (!(spec.eta > 0.0)) throw std::invalid_argument("spec: eta must be > 0");
  if (!(spec.sigma >= 0.0)) {
    throw std::invalid_argument("spec: sigma must be >= 0");
  }
  if (spec.K < 1) throw std::invalid_argument("spec: K must be >= 1");
  if (spec.steps < 0) throw std::invalid_argument("spec: steps must be >= 0");
  if (spec.dim < 1) throw std::invalid_argument("spec: dim must be >= 1");
}

double VarianceLowerBound(const ConvexSpec& spec, int t) {
  if (t < 0) throw std::invalid_argument("VarianceLowerBound: t < 0");
  const double eta2 = spec.eta * spec.eta;
  const double denom = eta2 * spec.mu * spec.mu - 2.0 * spec.eta * spec.beta;
  if (denom == 0.0) {
    throw std::invalid_argument(
        "VarianceLowerBound: eta^2 mu^2 - 2 eta beta is zero");
  }
  const double k2 = static_cast<double>(spec.K) * spec.K;
  return (std::pow(spec.RateBase(), t + 1) - 1.0) * eta2 * spec.sigma *
         spec.sigma / (denom * k2);
}

std::vector<DivergencePoint> MonteCarloDivergence(const ConvexSpec& spec,
                                                  int trials,
                                                  std::uint64_t seed) {
  ValidateSpec(spec);
  if (trials < 100) {
    throw std::invalid_argument("MonteCarloDivergence: need >= 100 trials");
  }
  const std::size_t steps = static_cast<std::size_t>(spec.steps);
  std::vector<double> sum(steps + 1, 0.0);
  std::vector<double> sum_sq(steps + 1, 0.0);

  // Fixed data shared by both trajectories and all trials.
  RngStream data_rng(seed, kDivergenceStream, 0);
  std::vector<Sample> data;
  for (int k = 0; k < spec.K; ++k) {
    data.push_back({GaussianSample(data_rng, spec.dim, 1.0), 0.0});
  }
  const Model base = Model::Quadratic(ParamVector(spec.dim), spec.mu);
  const double noise_scale = spec.eta / spec.K;

  for (int trial = 0; trial < trials; ++trial) {
    RngStream rng(seed, kDivergenceStream, 1 + static_cast<std::uint64_t>(trial));
    Model clean = base;
    Model noisy = base;
    for (std::size_t t = 1; t <= steps; ++t) {
      clean.theta.AddScaled(-spec.eta, Grad(clean, data));
      noisy.theta.AddScaled(-spec.eta, Grad(noisy, data));
      noisy.theta.AddScaled(noise_scale,
                            GaussianSample(rng, spec.dim, spec.sigma));
      const double d2 = SquaredNorm(noisy.theta - clean.theta);
      sum[t] += d2;
      sum_sq[t] += d2 * d2;
    }
  }

  std::vector<DivergencePoint> out(steps + 1);
  const double n = trials;
  for (std::size_t t = 0; t <= steps; ++t) {
    const double mean = sum[t] / n;
    const double var = std::max(0.0, (sum_sq[t] - n * mean * mean) / (n - 1.0));
    out[t] = {static_cast<int>(t), mean, 1.959963984540054 * std::sqrt(var / n)};
  }
  return out;
}

std::vector<ParamVector> ClippedSgdTrajectory(const ParamVector& theta0,
                                              std::span<const Sample> data,
                                              double mu, double eta, double c,
                                              int steps) {
  if (data.empty()) throw std::invalid_argument("ClippedSgd: empty data");
  Model model = Model::Quadratic(ParamVector(theta0.dim()), mu);
  model.theta = theta0;
  std::vector<ParamVector> out{theta0};
  for (int t = 0; t < steps; ++t) {
    ParamVector sum(theta0.dim());
    for (const Sample& s : data) sum += ClipToNorm(SampleGradient(model, s), c);
    model.theta.AddScaled(-eta / static_cast<double>(data.size()), sum);
    out.push_back(model.theta);
  }
  return out;
}

SensitivityCheck CheckSensitivity(const ParamVector& theta0,
                                  std::span<const Sample> data,
                                  std::span<const Sample> pool, double mu,
                                  double eta, double c, int steps) {
  const auto reference = ClippedSgdTrajectory(theta0, data, mu, eta, c, steps);
  SensitivityCheck out;
  out.empirical.assign(static_cast<std::size_t>(steps) + 1, 0.0);
  for (int t = 0; t <= steps; ++t) {
    out.bound.push_back(SensitivityBound(t, eta, c));
  }
  std::vector<Sample> neighbour(data.begin(), data.end());
  for (std::size_t i = 0; i < data.size(); ++i) {
    for (const Sample& replacement : pool) {
      neighbour[i] = replacement;
      const auto traj =
          ClippedSgdTrajectory(theta0, neighbour, mu, eta, c, steps);
      for (std::size_t t = 0; t < traj.size(); ++t) {
        out.empirical[t] =
            std::max(out.empirical[t], L2Norm(traj[t] - reference[t]));
      }
      ++out.neighbours;
    }
    neighbour[i] = data[i];
  }
  for (std::size_t t = 0; t < out.bound.size(); ++t) {
    // A hair of slack for rounding in the trajectories themselves.
    if (out.empirical[t] > out.bound[t] * (1.0 + 1e-12) + 1e-15) {
      out.holds = false;
    }
  }
  return out;
}

double NoiseCumulationSlope(std::span<const int> horizons, int trials,
                            double sigma, std::uint64_t seed) {
  if (horizons.size() < 2) {
    throw std::invalid_argument("NoiseCumulationSlope: need >= 2 horizons");
  }
  std::vector<double> xs;
  std::vector<double> ys;
  for (int horizon : horizons) {
    RngStream rng(seed, kCumulationStream, static_cast<std::uint64_t>(horizon));
    double sum_sq = 0.0;
    for (int trial = 0; trial < trials; ++trial) {
      double total = 0.0;
      for (int s = 0; s < horizon; ++s) total += sigma * rng.Normal();
      sum_sq += total * total;
    }
    xs.push_back(std::log(static_cast<double>(horizon)));
    ys.push_back(0.5 * std::log(sum_sq / trials));
  }
  const double n = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  return sxy / sxx;
}

}  // namespace fedsplit
