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

#include <cmath>

#include <gtest/gtest.h>

namespace fedsplit {
namespace {

TEST(GeometricRecurrence, Examples) {
  EXPECT_EQ(GeometricRecurrence(2.0, 1.0, 3), 7.0);
  EXPECT_EQ(GeometricRecurrence(0.5, 3.0, 0), 0.0);
  EXPECT_THROW(GeometricRecurrence(1.0, 1.0, 3), std::invalid_argument);
  EXPECT_THROW(GeometricRecurrence(2.0, 1.0, -1), std::invalid_argument);
}

TEST(GeometricRecurrence, MatchesIteration) {
  RngStream rng(5, 1, 0);
  for (int trial = 0; trial < 100; ++trial) {
    double a = -1.5 + 3.0 * rng.Uniform();
    if (std::abs(a - 1.0) < 1e-3) a = 1.25;
    const double b = -2.0 + 4.0 * rng.Uniform();
    const int t = static_cast<int>(rng.UniformInt(40));
    double x = 0.0;
    for (int s = 0; s < t; ++s) x = a * x + b;
    EXPECT_NEAR(GeometricRecurrence(a, b, t), x,
                1e-9 * std::max(1.0, std::abs(x)));
  }
}

TEST(SensitivityBound, Examples) {
  EXPECT_EQ(SensitivityBound(0, 0.1, 1.0), 0.0);
  EXPECT_DOUBLE_EQ(SensitivityBound(10, 0.1, 1.0), 2.0);
  EXPECT_THROW(SensitivityBound(-1, 0.1, 1.0), std::invalid_argument);
}

ConvexSpec PaperSpec() {
  ConvexSpec s;
  s.mu = 1.0;
  s.beta = 1.0;
  s.eta = 0.1;
  s.sigma = 1.0;
  s.K = 1;
  s.steps = 50;
  return s;
}

TEST(VarianceLowerBound, Examples) {
  const ConvexSpec s = PaperSpec();
  EXPECT_DOUBLE_EQ(s.RateBase(), 0.81);
  EXPECT_DOUBLE_EQ(VarianceLowerBound(s, 0), 0.01);
  EXPECT_NEAR(VarianceLowerBound(s, 5), 0.037767, 1e-5);
  EXPECT_NEAR(VarianceLowerBound(s, 5),
              (std::pow(0.81, 6) - 1.0) * 0.01 / -0.19, 1e-15);
  // Each of K samples contributes noise scaled by 1/K.
  ConvexSpec k2 = s;
  k2.K = 2;
  EXPECT_DOUBLE_EQ(VarianceLowerBound(k2, 3), VarianceLowerBound(s, 3) / 4.0);
}

TEST(VarianceLowerBound, NondecreasingAndBounded) {
  const ConvexSpec s = PaperSpec();
  double prev = 0.0;
  for (int t = 0; t <= 200; ++t) {
    const double b = VarianceLowerBound(s, t);
    EXPECT_GE(b, prev);
    EXPECT_LT(b, 0.01 / 0.19 + 1e-12);
    prev = b;
  }
}

TEST(VarianceLowerBound, Errors) {
  ConvexSpec s = PaperSpec();
  s.eta = 2.0;  // eta^2 mu^2 - 2 eta beta = 4 - 4
  EXPECT_THROW(VarianceLowerBound(s, 1), std::invalid_argument);
  EXPECT_THROW(VarianceLowerBound(PaperSpec(), -1), std::invalid_argument);
}

TEST(ValidateSpec, Errors) {
  EXPECT_NO_THROW(ValidateSpec(PaperSpec()));
  auto bad = [](auto mutate) {
    ConvexSpec s = PaperSpec();
    mutate(s);
    return s;
  };
  EXPECT_THROW(ValidateSpec(bad([](ConvexSpec& s) { s.mu = 0.0; })),
               std::invalid_argument);
  EXPECT_THROW(ValidateSpec(bad([](ConvexSpec& s) { s.beta = 0.5; })),
               std::invalid_argument);
  EXPECT_THROW(ValidateSpec(bad([](ConvexSpec& s) { s.eta = -0.1; })),
               std::invalid_argument);
  EXPECT_THROW(ValidateSpec(bad([](ConvexSpec& s) { s.sigma = -1.0; })),
               std::invalid_argument);
  EXPECT_THROW(ValidateSpec(bad([](ConvexSpec& s) { s.K = 0; })),
               std::invalid_argument);
  EXPECT_THROW(ValidateSpec(bad([](ConvexSpec& s) { s.dim = 0; })),
               std::invalid_argument);
}

TEST(MonteCarloDivergence, ZeroNoiseIsExactlyZero) {
  ConvexSpec s = PaperSpec();
  s.sigma = 0.0;
  s.dim = 3;
  s.K = 2;
  for (const DivergencePoint& p : MonteCarloDivergence(s, 100, 1)) {
    EXPECT_EQ(p.estimate, 0.0);
    EXPECT_EQ(p.ci_half_width, 0.0);
  }
}

TEST(MonteCarloDivergence, FirstStepMatchesSingleInjection) {
  ConvexSpec s = PaperSpec();
  s.dim = 3;
  s.K = 2;
  s.steps = 3;
  const auto points = MonteCarloDivergence(s, 4000, 2);
  ASSERT_EQ(points.size(), 4u);
  EXPECT_EQ(points[0].estimate, 0.0);
  const double expected = 3.0 * 0.01 / 4.0;
  EXPECT_NEAR(points[1].estimate, expected, points[1].ci_half_width);
}

TEST(MonteCarloDivergence, TracksExactVarianceInOneDimension) {
  // e_t = (1 - eta mu) e_{t-1} + eta N: variance 0.01 (1 - 0.81^t) / 0.19.
  const auto points = MonteCarloDivergence(PaperSpec(), 2000, 3);
  ASSERT_EQ(points.size(), 51u);
  for (int t : {1, 5, 20, 50}) {
    const double exact = 0.01 * (1.0 - std::pow(0.81, t)) / 0.19;
    EXPECT_NEAR(points[t].estimate, exact, 1.5 * points[t].ci_half_width)
        << "t=" << t;
    EXPECT_NEAR(VarianceLowerBound(PaperSpec(), t - 1), exact, 1e-15);
  }
}

TEST(MonteCarloDivergence, Deterministic) {
  const auto a = MonteCarloDivergence(PaperSpec(), 200, 9);
  const auto b = MonteCarloDivergence(PaperSpec(), 200, 9);
  for (std::size_t t = 0; t < a.size(); ++t) {
    EXPECT_EQ(a[t].estimate, b[t].estimate);
  }
  EXPECT_THROW(MonteCarloDivergence(PaperSpec(), 99, 1), std::invalid_argument);
}

TEST(ClippedSgdTrajectory, UnclippedQuadraticContracts) {
  // Gradient mu (theta - x); the minimizer of the mean loss is the data mean.
  const std::vector<Sample> data = {{ParamVector{1.0}, 0.0},
                                    {ParamVector{3.0}, 0.0}};
  const auto traj =
      ClippedSgdTrajectory(ParamVector{0.0}, data, 1.0, 0.1, 1e9, 40);
  ASSERT_EQ(traj.size(), 41u);
  EXPECT_EQ(traj[0], ParamVector{0.0});
  for (int t = 0; t <= 40; ++t) {
    EXPECT_NEAR(traj[t][0], 2.0 * (1.0 - std::pow(0.9, t)), 1e-12);
  }
}

TEST(ClippedSgdTrajectory, StepBoundedByClip) {
  const std::vector<Sample> data = {{ParamVector{100.0, 0.0}, 0.0}};
  const auto traj =
      ClippedSgdTrajectory(ParamVector(2), data, 1.0, 0.1, 0.5, 5);
  for (std::size_t t = 1; t < traj.size(); ++t) {
    EXPECT_NEAR(L2Norm(traj[t] - traj[t - 1]), 0.05, 1e-12);
  }
  EXPECT_THROW(ClippedSgdTrajectory(ParamVector(2), {}, 1.0, 0.1, 0.5, 5),
               std::invalid_argument);
}

TEST(CheckSensitivity, HoldsOverAllAdjacentDatasets) {
  RngStream rng(4, 4, 4);
  std::vector<Sample> data;
  std::vector<Sample> pool;
  for (int i = 0; i < 4; ++i) data.push_back({GaussianSample(rng, 3, 2.0), 0.0});
  for (int i = 0; i < 8; ++i) pool.push_back({GaussianSample(rng, 3, 5.0), 0.0});
  const SensitivityCheck check =
      CheckSensitivity(ParamVector(3), data, pool, 1.0, 0.1, 1.0, 10);
  EXPECT_EQ(check.neighbours, 32);
  ASSERT_EQ(check.empirical.size(), 11u);
  EXPECT_TRUE(check.holds);
  EXPECT_EQ(check.empirical[0], 0.0);
  for (std::size_t t = 0; t < check.bound.size(); ++t) {
    EXPECT_LE(check.empirical[t], check.bound[t]);
  }
  EXPECT_GT(check.empirical[10], 0.0);
}

TEST(NoiseCumulationSlope, IsOneHalf) {
  const std::vector<int> horizons = {10, 40, 160, 640};
  EXPECT_NEAR(NoiseCumulationSlope(horizons, 2000, 1.0, 1), 0.5, 0.05);
  EXPECT_THROW(NoiseCumulationSlope(std::vector<int>{10}, 100, 1.0, 1),
               std::invalid_argument);
}

}  // namespace
}  // namespace fedsplit
