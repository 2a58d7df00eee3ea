//
// Copyright 2026 The sclab Authors
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
//

#include <cmath>

#include <gtest/gtest.h>

#include "sclab/estimators.hpp"

namespace sclab {
namespace {

const SemanticLabel kA{0, "video", 0.5};
const SemanticLabel kB{1, "web", 0.5};

ProfileSampler video_vs_web(ChainConfig chain = {}) {
  const auto p = preset_profiles();
  return ProfileSampler{{{0, p.at("video")}, {1, p.at("web")}}, chain, 10.0};
}

// Emits a fixed plaintext regardless of seed.
struct ConstantSampler {
  std::uint32_t bytes_a;
  std::uint32_t bytes_b;

  ChainTrace operator()(const SemanticLabel& label, std::uint64_t seed) const {
    MessageSequence m;
    m.label = label;
    const auto bytes = label.id == 0 ? bytes_a : bytes_b;
    if (bytes > 0) m.events.push_back({1.0, bytes, Direction::kDown});
    ProtocolConfig big;
    big.mtu_bytes = 2'000'040;
    big.header_bytes = 0;
    auto chain = identity_chain_config();
    chain.protocol = big;
    return propagate(m, chain, seed);
  }
};

TEST(Estimators, MomentsAndMeans) {
  const std::vector<double> v{1, 2, 3, 4};
  const auto m = moments(v);
  EXPECT_DOUBLE_EQ(m.mean, 2.5);
  EXPECT_DOUBLE_EQ(m.variance, 5.0 / 3.0);
  const auto e = mean_estimate(v);
  EXPECT_NEAR(e.hi - e.point, kZ99 * std::sqrt(5.0 / 12.0), 1e-12);
}

TEST(Estimators, TrialSeedsAreDistinct) {
  std::set<std::uint64_t> seen;
  for (int label = 0; label < 3; ++label)
    for (std::uint64_t t = 0; t < 1000; ++t) seen.insert(trial_seed(42, label, t));
  EXPECT_EQ(seen.size(), 3000u);
}

TEST(Estimators, CollectIndependentOfThreads) {
  const auto s = video_vs_web();
  auto bytes = [](const ChainTrace& t) { return t.arrival.total_bytes(); };
  EXPECT_EQ(collect(s, kB, 300, 9, bytes, 1), collect(s, kB, 300, 9, bytes, 7));
}

TEST(Estimators, ParallelMapPropagatesErrors) {
  EXPECT_THROW(parallel_map(100, 4,
                            [](std::size_t i) -> int {
                              if (i == 57) throw std::runtime_error("boom");
                              return 0;
                            }),
               std::runtime_error);
}

TEST(Estimators, DeltaBarIdenticalProfilesContainsZero) {
  const auto web = preset_profiles().at("web");
  const ProfileSampler s{{{0, web}, {1, web}}, ChainConfig{}, 10.0};
  const auto phi = make_statistic({StatisticKind::kClippedTotalBytes}, MetricConfig{});
  const auto e = estimate_delta_bar(s, {kA, kB}, phi, 10.0, 1000, 3);
  EXPECT_EQ(e.lo, 0.0);
  EXPECT_LE(e.lo, e.point);
  EXPECT_LE(e.point, e.hi);
}

TEST(Estimators, DeltaBarVideoVsWebExcludesZero) {
  const auto phi = make_statistic({StatisticKind::kClippedTotalBytes}, MetricConfig{});
  const auto e = estimate_delta_bar(video_vs_web(), {kA, kB}, phi, 10.0, 1000, 3, 0);
  EXPECT_GT(e.lo, 0.0);
  EXPECT_EQ(e.status, EstimateStatus::kOk);
  EXPECT_EQ(e.n, 2000u);
}

TEST(Estimators, DeltaBarConstructedExtremes) {
  const auto phi = make_statistic({StatisticKind::kClippedTotalBytes}, MetricConfig{});
  const auto e = estimate_delta_bar(ConstantSampler{1'000'000, 0}, {kA, kB}, phi, 10.0, 100, 1);
  EXPECT_EQ(e.point, 2.0);
  EXPECT_EQ(e.lo, 2.0);
  EXPECT_EQ(e.hi, 2.0);
  const auto same = estimate_delta_bar(ConstantSampler{500, 500}, {kA, kB}, phi, 10.0, 100, 1);
  EXPECT_EQ(same.status, EstimateStatus::kDegenerate);
}

TEST(Estimators, DeltaBarPreconditions) {
  const auto phi = make_statistic({StatisticKind::kClippedTotalBytes}, MetricConfig{});
  EXPECT_THROW(estimate_delta_bar(video_vs_web(), {kA, kB}, phi, 10.0, 99, 1), ValidationError);
  const SemanticLabel zero{1, "web", 0.0};
  EXPECT_THROW(estimate_delta_bar(video_vs_web(), {kA, zero}, phi, 10.0, 100, 1), ValidationError);
}

TEST(Estimators, CIdentityChainIsZero) {
  const auto s = video_vs_web(identity_chain_config());
  const SemanticLabel labels[] = {kA, kB};
  const auto e = estimate_C(s, labels, MetricConfig{}, 10.0, 100, 5);
  EXPECT_EQ(e.point, 0.0);
  EXPECT_EQ(e.hi, 0.0);
}

TEST(Estimators, CUnderBlockPaddingMatchesPaddingArithmetic) {
  auto chain = identity_chain_config();
  chain.encryption.padding = Padding{PadPolicy::kPadToBlock, 64};
  const auto s = video_vs_web(chain);
  MetricConfig m;
  // Per-packet padding is at most 63 bytes, far below the pair cap.
  auto pad_cost = [&](const ChainTrace& t) {
    double sum = 0.0;
    for (const auto& p : embed(t.plaintext, 10.0).points) {
      const auto padded = 64 * ((p.length_bytes + 63) / 64);
      sum += m.w_len * (padded - p.length_bytes) / m.s_cap_bytes;
    }
    return sum;
  };
  auto d = [&](const ChainTrace& t) {
    return metric_d(embed(t.plaintext, 10.0), embed(t.arrival, 10.0), m);
  };
  for (const auto& label : {kA, kB}) {
    const auto expected = collect(s, label, 100, 8, pad_cost);
    const auto got = collect(s, label, 100, 8, d);
    for (std::size_t i = 0; i < got.size(); ++i) EXPECT_NEAR(got[i], expected[i], 1e-12);
  }
  const SemanticLabel labels[] = {kA, kB};
  const auto e = estimate_C(s, labels, m, 10.0, 100, 8);
  const double va = moments(collect(s, kA, 100, 8, pad_cost)).mean;
  const double vb = moments(collect(s, kB, 100, 8, pad_cost)).mean;
  EXPECT_NEAR(e.point, std::max(va, vb), 1e-12);
}

TEST(Estimators, CNondecreasingInJitter) {
  const SemanticLabel labels[] = {kA, kB};
  MetricConfig time_only;
  time_only.w_len = 0.0;
  time_only.w_dir = 0.0;
  double prev = -1.0;
  for (double jitter : {0.0, 0.001, 0.005, 0.02, 0.1}) {
    auto chain = identity_chain_config();
    chain.network.jitter_s = jitter;
    const auto e = estimate_C(video_vs_web(chain), labels, time_only, 10.0, 200, 4);
    EXPECT_GE(e.point, prev) << jitter;
    prev = e.point;
  }
}

TEST(Estimators, RhoLosslessIsOne) {
  const auto phi = make_statistic({StatisticKind::kClippedTotalBytes}, MetricConfig{});
  const ObservationStatistic psi{phi.shape};
  const auto e = estimate_rho(video_vs_web(), {kA, kB}, phi, psi, 10.0, 500, 2);
  EXPECT_TRUE(e.identifiable());
  EXPECT_NEAR(e.point, 1.0, 1e-12);
  EXPECT_LE(e.lo, 1.0);
  EXPECT_GE(e.hi, 1.0 - 1e-12);
}

TEST(Estimators, RhoUnderSamplingDrops) {
  auto chain = ChainConfig{};
  chain.observation.keep_probability = 0.5;
  const auto phi = make_statistic({StatisticKind::kClippedTotalBytes}, MetricConfig{});
  const ObservationStatistic psi{phi.shape};
  const auto e = estimate_rho(video_vs_web(chain), {kA, kB}, phi, psi, 10.0, 500, 2);
  EXPECT_TRUE(e.identifiable());
  EXPECT_LT(e.hi, 1.0);
  EXPECT_GT(e.lo, 0.0);
}

TEST(Estimators, RhoOfConstantObserverIsZero) {
  const auto phi = make_statistic({StatisticKind::kClippedTotalBytes}, MetricConfig{});
  // A 1-byte saturation point makes psi = +1 on every non-empty window.
  const ObservationStatistic constant{{StatisticKind::kClippedTotalBytes, 1.0}};
  const auto e = estimate_rho(video_vs_web(), {kA, kB}, phi, constant, 10.0, 300, 2);
  EXPECT_TRUE(e.identifiable());
  EXPECT_NEAR(e.point, 0.0, 0.02);
}

TEST(Estimators, RhoUnidentifiableWhenDenominatorStraddlesZero) {
  const auto web = preset_profiles().at("web");
  const ProfileSampler s{{{0, web}, {1, web}}, ChainConfig{}, 10.0};
  const auto phi = make_statistic({StatisticKind::kClippedTotalBytes}, MetricConfig{});
  const auto e = estimate_rho(s, {kA, kB}, phi, ObservationStatistic{phi.shape}, 10.0, 300, 2);
  EXPECT_FALSE(e.identifiable());
  EXPECT_EQ(e.status, EstimateStatus::kUnidentifiable);
}

TEST(Estimators, IntervalsShrinkWithSampleSize) {
  const auto phi = make_statistic({StatisticKind::kClippedTotalBytes}, MetricConfig{});
  const auto small = estimate_delta_bar(video_vs_web(), {kA, kB}, phi, 10.0, 250, 6, 0);
  const auto large = estimate_delta_bar(video_vs_web(), {kA, kB}, phi, 10.0, 4000, 6, 0);
  const double ratio = (small.hi - small.lo) / (large.hi - large.lo);
  EXPECT_NEAR(ratio, 4.0, 1.0);
}

TEST(Estimators, AbsoluteGapFolding) {
  const std::vector<double> a{-1, -1.1, -0.9, -1.0};
  const std::vector<double> b{1, 1.1, 0.9, 1.0};
  const auto e = absolute_gap(a, b);
  EXPECT_NEAR(e.point, 2.0, 1e-12);
  EXPECT_GT(e.lo, 0.0);
  EXPECT_LE(e.lo, e.point);
}

}  // namespace
}  // namespace sclab
