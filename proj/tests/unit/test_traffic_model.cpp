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

#include "sclab/estimate.hpp"
#include "sclab/traffic_model.hpp"

namespace sclab {
namespace {

const SemanticLabel kVideo{0, "video", 0.5};
const SemanticLabel kWeb{1, "web", 0.5};

double mean_total_bytes(const TrafficProfile& p, std::uint64_t first, int n) {
  double s = 0.0;
  for (int i = 0; i < n; ++i) s += static_cast<double>(generate_session(kVideo, p, 10.0, first + i).total_bytes());
  return s / n;
}

TEST(TrafficModel, PriorsValidation) {
  std::vector<SemanticLabel> ok{{0, "a", 0.25}, {1, "b", 0.75}};
  EXPECT_NO_THROW(validate_priors(ok));
  std::vector<SemanticLabel> bad{{0, "a", 0.25}, {1, "b", 0.7}};
  EXPECT_THROW(validate_priors(bad), ValidationError);
  std::vector<SemanticLabel> neg{{0, "a", -0.25}, {1, "b", 1.25}};
  EXPECT_THROW(validate_priors(neg), ValidationError);
}

TEST(TrafficModel, PresetsContainArchetypes) {
  const auto p = preset_profiles();
  for (const char* k : {"video", "web", "chat", "bulk"}) {
    ASSERT_TRUE(p.contains(k)) << k;
    EXPECT_NO_THROW(validate(p.at(k)));
    EXPECT_NO_THROW(generate_session(kVideo, p.at(k), 10.0, 1));
  }
}

TEST(TrafficModel, VideoMovesTenTimesWebBytes) {
  const auto p = preset_profiles();
  const double video = mean_total_bytes(p.at("video"), 1, 1000);
  const double web = mean_total_bytes(p.at("web"), 1, 1000);
  EXPECT_GE(video, 10.0 * web) << video << " vs " << web;
}

TEST(TrafficModel, ZeroRateGivesEmptySession) {
  auto p = preset_profiles().at("video");
  p.burst_rate_hz = 0.0;
  EXPECT_TRUE(generate_session(kVideo, p, 10.0, 7).events.empty());
}

TEST(TrafficModel, ChatIsBalanced) {
  const auto chat = preset_profiles().at("chat");
  double sum = 0.0;
  int sessions = 0;
  for (std::uint64_t s = 0; s < 1000; ++s) {
    const auto m = generate_session(kVideo, chat, 10.0, 3 + s);
    if (m.events.empty()) continue;
    int up = 0;
    for (const auto& e : m.events) up += e.direction == Direction::kUp;
    sum += static_cast<double>(up) / static_cast<double>(m.events.size());
    ++sessions;
  }
  const double mean = sum / sessions;
  EXPECT_GE(mean, 0.35);
  EXPECT_LE(mean, 0.65);
}

TEST(TrafficModel, SessionInvariants) {
  for (const auto& [name, p] : preset_profiles()) {
    for (std::uint64_t s = 0; s < 50; ++s) {
      const auto m = generate_session(kWeb, p, 10.0, s);
      for (std::size_t i = 0; i < m.events.size(); ++i) {
        EXPECT_GE(m.events[i].time_s, 0.0);
        EXPECT_LT(m.events[i].time_s, 10.0);
        EXPECT_GE(m.events[i].size_bytes, 1u);
        if (i) EXPECT_LE(m.events[i - 1].time_s, m.events[i].time_s);
      }
    }
  }
}

TEST(TrafficModel, Deterministic) {
  const auto p = preset_profiles().at("web");
  const auto a = generate_session(kWeb, p, 10.0, 99);
  const auto b = generate_session(kWeb, p, 10.0, 99);
  EXPECT_EQ(a.events, b.events);
  EXPECT_NE(a.events, generate_session(kWeb, p, 10.0, 100).events);
}

TEST(TrafficModel, DisjointSeedRangesAgreeInMean) {
  const auto p = preset_profiles().at("video");
  std::vector<double> a, b;
  for (std::uint64_t s = 0; s < 2000; ++s) {
    a.push_back(static_cast<double>(generate_session(kVideo, p, 10.0, s).total_bytes()));
    b.push_back(static_cast<double>(generate_session(kVideo, p, 10.0, 1'000'000 + s).total_bytes()));
  }
  const auto ma = moments(a);
  const auto mb = moments(b);
  const double z = (ma.mean - mb.mean) / std::hypot(ma.standard_error(), mb.standard_error());
  EXPECT_LT(std::fabs(z), kZ99);
}

TEST(TrafficModel, ValidationNamesField) {
  auto p = preset_profiles().at("chat");
  p.up_fraction = 1.5;
  try {
    generate_session(kVideo, p, 10.0, 1);
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_EQ(e.field(), "up_fraction");
  }
  p = preset_profiles().at("chat");
  p.burst_rate_hz = -1.0;
  try {
    generate_session(kVideo, p, 10.0, 1);
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_EQ(e.field(), "burst_rate_hz");
  }
  EXPECT_THROW(generate_session(kVideo, preset_profiles().at("chat"), 0.0, 1), ValidationError);
}

TEST(TrafficModel, ParetoSizesRespectCap) {
  const TrafficProfile p{ClassKind::kCustom, 50.0, TruncatedParetoSize{1.1, 100.0, 500.0}, 0.5, 1.0, 1.0};
  const auto m = generate_session(kWeb, p, 10.0, 4);
  ASSERT_FALSE(m.events.empty());
  for (const auto& e : m.events) {
    EXPECT_GE(e.size_bytes, 100u);
    EXPECT_LE(e.size_bytes, 500u);
  }
}

TEST(TrafficModel, ClassKindRoundTrip) {
  for (auto k : {ClassKind::kVideo, ClassKind::kWeb, ClassKind::kChat, ClassKind::kBulk, ClassKind::kCustom})
    EXPECT_EQ(parse_class_kind(to_string(k)), k);
  EXPECT_THROW(parse_class_kind("voice"), ValidationError);
}

}  // namespace
}  // namespace sclab
