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

#include <cmath>
#include <random>

#include <gtest/gtest.h>

namespace fedsplit {
namespace {

UpdatePacket Packet(ParamVector delta, int id = 0) {
  UpdatePacket p;
  p.participant_id = id;
  p.delta = std::move(delta);
  return p;
}

std::vector<UpdatePacket> RandomPackets(std::mt19937_64& gen, int n,
                                        std::size_t dim, double scale) {
  std::normal_distribution<double> nd(0.0, scale);
  std::vector<UpdatePacket> out;
  for (int i = 0; i < n; ++i) {
    std::vector<double> v(dim);
    for (auto& x : v) x = nd(gen);
    out.push_back(Packet(ParamVector(std::move(v)), i));
  }
  return out;
}

TEST(ClipUpdate, SpecExamples) {
  const ParamVector under{0.6, 0.0, 2.4 * 1.25};  // norm ~3.06 < 5
  EXPECT_EQ(ClipUpdate(under, 5.0), under);
  const ParamVector c = ClipUpdate(ParamVector{3.0, 4.0}, 2.5);
  EXPECT_DOUBLE_EQ(c[0], 1.5);
  EXPECT_DOUBLE_EQ(c[1], 2.0);
  EXPECT_TRUE(ClipUpdate(ParamVector(4), 1.0).IsZero());
}

TEST(ClipUpdate, NormIsMinAndDirectionPreserved) {
  std::mt19937_64 gen(5);
  for (const auto& p : RandomPackets(gen, 100, 7, 2.0)) {
    const double C = 3.0;
    const ParamVector c = ClipUpdate(p.delta, C);
    const double n = L2Norm(p.delta);
    EXPECT_LE(L2Norm(c), C * (1.0 + 1e-15));
    EXPECT_NEAR(L2Norm(c), std::min(n, C), 1e-12);
    EXPECT_NEAR(Dot(c, p.delta), L2Norm(c) * n, 1e-9);
  }
}

TEST(NoiseSpec, MeanStd) {
  EXPECT_DOUBLE_EQ((NoiseSpec{1.0, 4}.MeanStd(1.0)), 0.25);
  EXPECT_DOUBLE_EQ((NoiseSpec{0.5, 10}.MeanStd(2.0)), 0.1);
}

TEST(Aggregate, NoiselessMean) {
  RngStream s(1, 1, 1);
  std::vector<UpdatePacket> same = {Packet({1.0, 0.0}), Packet({1.0, 0.0})};
  EXPECT_EQ(Aggregate(same, 1.0, 0.0, s).noisy_mean, (ParamVector{1.0, 0.0}));
  std::vector<UpdatePacket> opp = {Packet({1.0, 0.0}), Packet({-1.0, 0.0})};
  EXPECT_TRUE(Aggregate(opp, 1.0, 0.0, s).noisy_mean.IsZero());
}

TEST(Aggregate, ZeroNoiseIsPlainMeanOfClippedBitwise) {
  std::mt19937_64 gen(7);
  const auto packets = RandomPackets(gen, 9, 33, 1.0);
  RngStream s(1, 1, 1);
  const AggregateResult r = Aggregate(packets, 2.0, 0.0, s);
  ParamVector sum(33);
  for (const auto& p : packets) sum += ClipUpdate(p.delta, 2.0);
  for (std::size_t j = 0; j < 33; ++j) EXPECT_EQ(r.noisy_mean[j], sum[j] / 9.0);
  EXPECT_EQ(r.clipped_sum, sum);
  EXPECT_TRUE(r.noise.IsZero());
  EXPECT_EQ(r.n_participants, 9);
  ASSERT_EQ(r.raw_norms.size(), 9u);
  EXPECT_EQ(r.raw_norms[3], L2Norm(packets[3].delta));
}

TEST(Aggregate, MonteCarloStdIsZCOverN) {
  const std::vector<UpdatePacket> zeros(4, Packet(ParamVector(2)));
  const int trials = 10000;
  double ss = 0.0;
  for (int t = 0; t < trials; ++t) {
    RngStream s(3, 0, static_cast<std::uint64_t>(t));
    const double x = Aggregate(zeros, 1.0, 1.0, s).noisy_mean[0];
    ss += x * x;
  }
  EXPECT_NEAR(std::sqrt(ss / trials), 0.25, 0.05 * 0.25);
}

TEST(Aggregate, NoiseEnergyMatchesDimension) {
  // E||zeta / N||^2 = d (z C / N)^2.
  const std::size_t d = 50;
  const std::vector<UpdatePacket> zeros(5, Packet(ParamVector(d)));
  const int trials = 2000;
  double acc = 0.0;
  for (int t = 0; t < trials; ++t) {
    RngStream s(4, 0, static_cast<std::uint64_t>(t));
    const AggregateResult r = Aggregate(zeros, 2.0, 0.7, s);
    acc += SquaredNorm(r.noise) / 25.0;
  }
  const double expect = d * std::pow(0.7 * 2.0 / 5.0, 2);
  EXPECT_NEAR(acc / trials, expect, 0.03 * expect);
}

TEST(Aggregate, Homogeneity) {
  std::mt19937_64 gen(8);
  const auto packets = RandomPackets(gen, 6, 10, 1.5);
  auto scaled = packets;
  for (auto& p : scaled) p.delta *= 4.0;
  RngStream s(1, 1, 1);
  const ParamVector a = Aggregate(packets, 1.2, 0.0, s).noisy_mean;
  const ParamVector b = Aggregate(scaled, 4.8, 0.0, s).noisy_mean;
  for (std::size_t j = 0; j < 10; ++j) EXPECT_NEAR(b[j], 4.0 * a[j], 1e-12);
}

TEST(Aggregate, Errors) {
  RngStream s(1, 1, 1);
  EXPECT_THROW(Aggregate({}, 1.0, 1.0, s), std::invalid_argument);
  std::vector<UpdatePacket> mixed = {Packet(ParamVector(2)), Packet(ParamVector(3))};
  EXPECT_THROW(Aggregate(mixed, 1.0, 1.0, s), std::invalid_argument);
  std::vector<UpdatePacket> one = {Packet(ParamVector(2))};
  EXPECT_THROW(Aggregate(one, 0.0, 1.0, s), std::invalid_argument);
}

TEST(AdaptClip, FixedPoint) {
  ClipState st{2.0, 0.2, 0.5, 0.0};
  RngStream s(1, 1, 1);
  const std::vector<double> norms = {1.0, 3.0};  // exactly half below C
  EXPECT_EQ(AdaptClip(st, norms, s).C, 2.0);
}

TEST(AdaptClip, AllBelowShrinksByExpMinusTenth) {
  ClipState st{2.0, 0.2, 0.5, 0.0};
  RngStream s(1, 1, 1);
  const std::vector<double> norms = {0.5, 1.0, 2.0};
  EXPECT_DOUBLE_EQ(AdaptClip(st, norms, s).C, 2.0 * std::exp(-0.1));
}

TEST(AdaptClip, AllAboveGrows) {
  ClipState st{1.0, 0.2, 0.5, 0.0};
  RngStream s(1, 1, 1);
  const std::vector<double> norms = {2.0, 5.0};
  const double c = AdaptClip(st, norms, s).C;
  EXPECT_DOUBLE_EQ(c, std::exp(0.2 * 0.5));
  EXPECT_GT(c, 1.0);
}

TEST(AdaptClip, NoisedCountStaysPositiveAndVaries) {
  ClipState st{1.0, 0.2, 0.5, 1.0};
  const std::vector<double> norms = {0.5, 2.0};
  RngStream a(1, 1, 1), b(1, 1, 2);
  const double ca = AdaptClip(st, norms, a).C;
  const double cb = AdaptClip(st, norms, b).C;
  EXPECT_GT(ca, 0.0);
  EXPECT_NE(ca, cb);
}

TEST(AdaptClip, TracksQuantile) {
  // Repeated steps drive C toward the gamma-quantile of a fixed norm set.
  std::vector<double> norms;
  for (int i = 1; i <= 101; ++i) norms.push_back(i * 0.01);
  ClipState st{5.0, 0.2, 0.5, 0.0};
  RngStream s(1, 1, 1);
  for (int t = 0; t < 400; ++t) st = AdaptClip(st, norms, s);
  EXPECT_NEAR(st.C, 0.51, 0.03);
}

TEST(UpdateNoiseMultiplier, Formula) {
  EXPECT_EQ(UpdateNoiseMultiplier(0.7, 0.0), 0.7);
  const double z = 1.0, sb = 5.0;
  EXPECT_DOUBLE_EQ(UpdateNoiseMultiplier(z, sb),
                   1.0 / std::sqrt(1.0 / (z * z) - 1.0 / (4.0 * sb * sb)));
  EXPECT_GT(UpdateNoiseMultiplier(z, sb), z);
  EXPECT_THROW(UpdateNoiseMultiplier(1.0, 0.5), std::invalid_argument);
}

TEST(MedianNorm, OddEven) {
  EXPECT_EQ(MedianNorm(std::vector<double>{3.0, 1.0, 2.0}), 2.0);
  EXPECT_EQ(MedianNorm(std::vector<double>{4.0, 1.0, 2.0, 3.0}), 2.5);
  EXPECT_THROW(MedianNorm(std::vector<double>{}), std::invalid_argument);
}

}  // namespace
}  // namespace fedsplit
