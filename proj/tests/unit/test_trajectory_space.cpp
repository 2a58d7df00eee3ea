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

#include "sclab/trajectory_space.hpp"

namespace sclab {
namespace {

WindowedTrajectory traj(std::vector<TrajectoryPoint> pts, double window = 10.0) {
  return WindowedTrajectory{std::move(pts), window};
}

TEST(TrajectorySpace, EmbedTruncates) {
  MarkedPacketSequence s;
  s.packets = {{0.5, 100}, {9.99, 200}, {10.0, 300}, {10.0 + 1e-9, 400}};
  const auto z = embed(s, 10.0);
  ASSERT_EQ(z.points.size(), 3u);
  EXPECT_EQ(z.points.back().length_bytes, 300u);
  EXPECT_TRUE(embed(MarkedPacketSequence{}, 10.0).points.empty());
  EXPECT_EQ(embed(z, 10.0), z);
  EXPECT_EQ(embed(embed(z, 5.0), 5.0), embed(z, 5.0));
  EXPECT_THROW(embed(s, 0.0), ValidationError);
}

TEST(TrajectorySpace, MetricBasics) {
  const MetricConfig m;
  const auto z = traj({{1.0, 500}, {2.0, 800, Direction::kUp}});
  EXPECT_EQ(metric_d(z, z, m), 0.0);
  EXPECT_THROW(metric_d(z, traj({}, 5.0), m), ValidationError);

  auto longer = z;
  longer.points[0].length_bytes += 1'000'000;
  MetricConfig literal;
  literal.cap_pairs = false;
  EXPECT_DOUBLE_EQ(metric_d(z, longer, literal), 1.0);
  // The default caps a matched pair at the cost of a deletion plus an insertion.
  EXPECT_DOUBLE_EQ(metric_d(z, longer, m), 2 * m.w_cnt);
}

TEST(TrajectorySpace, MetricMatchesWeightedSum) {
  MetricConfig m;
  m.w_dir = 0.0;
  m.cap_pairs = false;
  const auto a = traj({{1.0, 1000}, {2.0, 2000}, {3.0, 100}});
  const auto b = traj({{1.5, 1500}, {2.0, 1000}});
  const double expected = 1.0 * (500 + 1000) / 1e6 + 0.05 * 1 + 0.1 * 0.5;
  EXPECT_NEAR(metric_d(a, b, m), expected, 1e-15);
  EXPECT_EQ(metric_d(a, b, m), metric_d(b, a, m));
}

TEST(TrajectorySpace, TriangleInequalityOnRandomTriples) {
  const MetricConfig m;
  const PerturbationSampler gen{10.0, 9000.0, 30};
  CounterRng rng(31);
  for (int i = 0; i < 10000; ++i) {
    const auto x = gen.random_trajectory(rng);
    const auto y = gen.random_trajectory(rng);
    const auto [z, z2] = gen(rng);
    EXPECT_LE(metric_d(x, y, m), metric_d(x, z, m) + metric_d(z, y, m) + 1e-12);
    EXPECT_LE(metric_d(z, z2, m), metric_d(z, x, m) + metric_d(x, z2, m) + 1e-12);
    EXPECT_EQ(metric_d(x, y, m), metric_d(y, x, m));
  }
}

TEST(TrajectorySpace, UncappedSumBreaksTriangleInequality) {
  MetricConfig literal;
  literal.cap_pairs = false;
  const auto a = traj({{0.0, 100}});
  const auto b = traj({{10.0, 100}});
  const auto empty = traj({});
  EXPECT_GT(metric_d(a, b, literal), metric_d(a, empty, literal) + metric_d(empty, b, literal));
}

TEST(TrajectorySpace, StatisticValues) {
  const MetricConfig m;
  const auto bytes = make_statistic({StatisticKind::kClippedTotalBytes}, m);
  EXPECT_DOUBLE_EQ(eval_statistic(bytes, traj({{1.0, 250000}, {2.0, 250000}})), 0.0);
  EXPECT_DOUBLE_EQ(eval_statistic(bytes, traj({{1.0, 1'000'000}, {2.0, 5}})), 1.0);
  EXPECT_DOUBLE_EQ(eval_statistic(bytes, traj({})), -1.0);

  const auto bal = make_statistic({StatisticKind::kUpdownBalance}, m);
  for (int n : {1, 3, 10}) {
    std::vector<TrajectoryPoint> up;
    for (int i = 0; i < n; ++i) up.push_back({0.1 * i, 100, Direction::kUp});
    EXPECT_DOUBLE_EQ(eval_statistic(bal, traj(up)), n / (n + 1.0));
  }
  EXPECT_DOUBLE_EQ(eval_statistic(bal, traj({})), 0.0);

  const auto gap = make_statistic({StatisticKind::kClippedMeanGap}, m);
  EXPECT_DOUBLE_EQ(eval_statistic(gap, traj({{1.0, 1}, {1.5, 1}})), 0.0);
  EXPECT_DOUBLE_EQ(eval_statistic(gap, traj({{1.0, 1}})), -1.0);
  EXPECT_DOUBLE_EQ(eval_statistic(gap, traj({{1.0, 1}, {9.0, 1}})), 1.0);

  const auto big = make_statistic({StatisticKind::kClippedTotalBytes}, m, 3.0);
  EXPECT_DOUBLE_EQ(eval_statistic(big, traj({})), -3.0);
}

TEST(TrajectorySpace, StatisticsRespectBound) {
  const MetricConfig m;
  const PerturbationSampler gen;
  CounterRng rng(2);
  for (auto kind : {StatisticKind::kClippedTotalBytes, StatisticKind::kUpdownBalance,
                    StatisticKind::kClippedMeanGap}) {
    StatisticShape shape{kind, 2e5, 0.05};
    const auto d = make_statistic(shape, m, 2.5);
    for (int i = 0; i < 20000; ++i) EXPECT_LE(std::fabs(eval_statistic(d, gen.random_trajectory(rng))), 2.5);
  }
}

TEST(TrajectorySpace, AnalyticLipschitzDefaults) {
  const MetricConfig m;
  EXPECT_DOUBLE_EQ(make_statistic({StatisticKind::kClippedTotalBytes}, m).lipschitz, 2.0);
  EXPECT_DOUBLE_EQ(make_statistic({StatisticKind::kUpdownBalance}, m).lipschitz, 20.0);
  EXPECT_DOUBLE_EQ(make_statistic({StatisticKind::kClippedMeanGap}, m).lipschitz, 40.0);
  MetricConfig no_dir = m;
  no_dir.w_dir = 0.0;
  EXPECT_THROW(make_statistic({StatisticKind::kUpdownBalance}, no_dir), ValidationError);
}

TEST(TrajectorySpace, CertificatesPass) {
  const MetricConfig m;
  for (auto kind : {StatisticKind::kClippedTotalBytes, StatisticKind::kUpdownBalance,
                    StatisticKind::kClippedMeanGap}) {
    const auto d = make_statistic({kind}, m);
    const auto cert = lipschitz_certificate(d, m, PerturbationSampler{}, 100000, 1);
    EXPECT_TRUE(cert.passes) << to_string(kind) << " ratio " << cert.max_ratio << " > " << cert.declared;
    EXPECT_GT(cert.max_ratio, 0.0);
  }
}

TEST(TrajectorySpace, CertificateCatchesUnderstatedConstant) {
  const MetricConfig m;
  auto d = make_statistic({StatisticKind::kClippedTotalBytes}, m);
  d.lipschitz /= 2;
  // One length perturbation of 9000 bytes: |dphi| = 2 * 9000 / S_cap, d = 9000 / S_cap.
  auto adversary = [](CounterRng&) {
    const WindowedTrajectory a{{{1.0, 1000}}, 10.0};
    WindowedTrajectory b = a;
    b.points[0].length_bytes += 8000;
    return std::pair{a, b};
  };
  const auto cert = lipschitz_certificate(d, m, adversary, 10, 1);
  EXPECT_NEAR(cert.max_ratio, 2.0, 1e-9);
  EXPECT_FALSE(cert.passes);
}

TEST(TrajectorySpace, CertificateOfConstantStatistic) {
  const MetricConfig m;
  const auto d = make_statistic({StatisticKind::kClippedTotalBytes, 1.0}, m);
  // Every non-empty trajectory saturates at +1.
  auto saturated = [](CounterRng& rng) {
    WindowedTrajectory a{{{1.0, 100}}, 10.0};
    WindowedTrajectory b{{{rng.uniform(1.0, 9.0), 200}}, 10.0};
    return std::pair{a, b};
  };
  const auto cert = lipschitz_certificate(d, m, saturated, 100, 1);
  EXPECT_EQ(cert.max_ratio, 0.0);
  EXPECT_TRUE(cert.passes);
}

TEST(TrajectorySpace, CertificateRejectsDegenerateSampler) {
  const MetricConfig m;
  const auto d = make_statistic({StatisticKind::kClippedTotalBytes}, m);
  auto same = [](CounterRng&) {
    const WindowedTrajectory a{{{1.0, 100}}, 10.0};
    return std::pair{a, a};
  };
  EXPECT_THROW(lipschitz_certificate(d, m, same, 100, 1), ValidationError);
}

TEST(TrajectorySpace, ObservationStatistic) {
  FeatureRecord rec;
  rec.aggregates = WindowAggregates{500000, 10, 4, 6, 0.5};
  const ObservationStatistic bytes{{StatisticKind::kClippedTotalBytes}};
  EXPECT_DOUBLE_EQ(eval_observation_statistic(bytes, rec), 0.0);
  EXPECT_DOUBLE_EQ(eval_observation_statistic({{StatisticKind::kUpdownBalance}}, rec), -2.0 / 11.0);
  EXPECT_DOUBLE_EQ(eval_observation_statistic({{StatisticKind::kClippedMeanGap}}, rec), 0.0);
  rec.aggregates = WindowAggregates{};
  EXPECT_DOUBLE_EQ(eval_observation_statistic(bytes, rec), -1.0);
  EXPECT_DOUBLE_EQ(eval_observation_statistic({{StatisticKind::kUpdownBalance}}, rec), 0.0);
  rec.aggregates.reset();
  try {
    eval_observation_statistic(bytes, rec);
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_EQ(e.field(), "aggregates");
  }
}

TEST(TrajectorySpace, LosslessObservationMatchesPhiOverM) {
  const MetricConfig m;
  const auto label = SemanticLabel{0, "web", 1.0};
  for (auto kind : {StatisticKind::kClippedTotalBytes, StatisticKind::kUpdownBalance,
                    StatisticKind::kClippedMeanGap}) {
    const auto phi = make_statistic({kind, 2e5, 0.2}, m, 2.0);
    const ObservationStatistic psi{phi.shape};
    for (std::uint64_t s = 0; s < 50; ++s) {
      const auto t = run_chain(label, preset_profiles().at("web"), identity_chain_config(), 10.0, s);
      EXPECT_NEAR(eval_observation_statistic(psi, t.features),
                  eval_statistic(phi, embed(t.arrival, 10.0)) / phi.bound_m, 1e-12);
    }
  }
}

TEST(TrajectorySpace, LengthQuantizationError) {
  const auto label = SemanticLabel{0, "web", 1.0};
  const ObservationStatistic psi{{StatisticKind::kClippedTotalBytes}};
  auto coarse = identity_chain_config();
  coarse.observation.length_granule_bytes = 100.0;
  for (std::uint64_t s = 0; s < 100; ++s) {
    const auto exact = run_chain(label, preset_profiles().at("web"), identity_chain_config(), 10.0, s);
    const auto quant = run_chain(label, preset_profiles().at("web"), coarse, 10.0, s);
    const double n = static_cast<double>(exact.features.aggregates->packet_count);
    EXPECT_LE(std::fabs(eval_observation_statistic(psi, quant.features) -
                        eval_observation_statistic(psi, exact.features)),
              2 * 100 * n / 1e6 + 1e-15);
  }
}

}  // namespace
}  // namespace sclab
