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

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <numeric>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "sclab/errors.hpp"
#include "sclab/random.hpp"

namespace sclab {

enum class Direction : std::uint8_t { kUp = 0, kDown = 1 };

constexpr std::string_view to_string(Direction d) noexcept {
  return d == Direction::kUp ? "up" : "down";
}

// A hidden semantic class (website, application) with its prior mass.
struct SemanticLabel {
  int id = 0;
  std::string name;
  double prior = 0.0;
};

// Priors over a semantic space must be probabilities summing to 1.
inline void validate_priors(std::span<const SemanticLabel> labels) {
  detail::require(!labels.empty(), "labels", "semantic space is empty");
  double sum = 0.0;
  for (const auto& l : labels) {
    detail::require_probability(l.prior, "prior[" + l.name + "]");
    sum += l.prior;
  }
  detail::require(std::fabs(sum - 1.0) <= 1e-12, "priors", "must sum to 1 within 1e-12");
}

struct MessageEvent {
  double time_s = 0.0;
  std::uint32_t size_bytes = 1;
  Direction direction = Direction::kDown;

  friend bool operator==(const MessageEvent&, const MessageEvent&) = default;
};

// Application-layer output for one session: time-ordered messages in
// [0, window_s). The seed stands in for the application's internal randomness.
struct MessageSequence {
  std::vector<MessageEvent> events;
  double window_s = 10.0;
  SemanticLabel label;
  std::uint64_t seed = 0;

  std::uint64_t total_bytes() const noexcept {
    std::uint64_t total = 0;
    for (const auto& e : events) total += e.size_bytes;
    return total;
  }
};

enum class ClassKind { kVideo, kWeb, kChat, kBulk, kCustom };

constexpr std::string_view to_string(ClassKind k) noexcept {
  switch (k) {
    case ClassKind::kVideo: return "video";
    case ClassKind::kWeb: return "web";
    case ClassKind::kChat: return "chat";
    case ClassKind::kBulk: return "bulk";
    case ClassKind::kCustom: return "custom";
  }
  return "custom";
}

inline ClassKind parse_class_kind(std::string_view s) {
  for (auto k : {ClassKind::kVideo, ClassKind::kWeb, ClassKind::kChat, ClassKind::kBulk,
                 ClassKind::kCustom}) {
    if (to_string(k) == s) return k;
  }
  throw ValidationError("kind", "unknown class kind '" + std::string(s) + "'");
}

// Message-size families.
struct LognormalSize {
  double log_mean = 0.0;  // mean of ln(size)
  double log_sd = 0.0;
};
struct TruncatedParetoSize {
  double shape = 1.5;
  double scale_bytes = 300.0;  // minimum size
  double cap_bytes = 60000.0;  // truncation point
};
struct FixedSize {
  double bytes = 200.0;
};
using SizeDistribution = std::variant<LognormalSize, TruncatedParetoSize, FixedSize>;

// Burst structure of one application class: an on/off renewal process whose
// "on" periods emit messages as a Poisson stream.
struct TrafficProfile {
  ClassKind kind = ClassKind::kCustom;
  double burst_rate_hz = 0.0;  // messages per second while on
  SizeDistribution sizes = FixedSize{};
  double up_fraction = 0.5;  // probability a message is upstream
  double duty_cycle = 1.0;   // long-run fraction of time spent on
  double cycle_s = 1.0;      // mean on+off period length
};

inline void validate(const TrafficProfile& p) {
  detail::require_non_negative(p.burst_rate_hz, "burst_rate_hz");
  detail::require_probability(p.up_fraction, "up_fraction");
  detail::require_probability(p.duty_cycle, "duty_cycle");
  detail::require(std::isfinite(p.cycle_s) && p.cycle_s > 0.0, "cycle_s", "must be > 0");
  std::visit(
      [](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, LognormalSize>) {
          detail::require_finite(s.log_mean, "size_log_mean");
          detail::require_non_negative(s.log_sd, "size_log_sd");
        } else if constexpr (std::is_same_v<T, TruncatedParetoSize>) {
          detail::require(std::isfinite(s.shape) && s.shape > 0.0, "size_shape", "must be > 0");
          detail::require(std::isfinite(s.scale_bytes) && s.scale_bytes >= 1.0, "size_scale_bytes",
                          "must be >= 1");
          detail::require(std::isfinite(s.cap_bytes) && s.cap_bytes >= s.scale_bytes,
                          "size_cap_bytes", "must be >= size_scale_bytes");
        } else {
          detail::require(std::isfinite(s.bytes) && s.bytes >= 1.0, "size_bytes", "must be >= 1");
        }
      },
      p.sizes);
}

namespace detail {

inline std::uint32_t draw_size(const SizeDistribution& dist, CounterRng& rng) {
  const double raw = std::visit(
      [&rng](const auto& s) -> double {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, LognormalSize>) {
          return std::exp(rng.normal(s.log_mean, s.log_sd));
        } else if constexpr (std::is_same_v<T, TruncatedParetoSize>) {
          // Inverse CDF of the Pareto law conditioned on x <= cap.
          const double tail = std::pow(s.scale_bytes / s.cap_bytes, s.shape);
          const double u = rng.uniform();
          return s.scale_bytes * std::pow(1.0 - u * (1.0 - tail), -1.0 / s.shape);
        } else {
          return s.bytes;
        }
      },
      dist);
  constexpr double kMax = 1.0e9;
  return static_cast<std::uint32_t>(std::clamp(std::round(raw), 1.0, kMax));
}

}  // namespace detail

// Operator A: draws one session of application messages for `label`.
// Deterministic in all arguments.
inline MessageSequence generate_session(const SemanticLabel& label, const TrafficProfile& profile,
                                        double window_s, std::uint64_t seed) {
  detail::require(std::isfinite(window_s) && window_s > 0.0, "window_s", "must be > 0");
  validate(profile);

  MessageSequence out;
  out.window_s = window_s;
  out.label = label;
  out.seed = seed;
  if (profile.burst_rate_hz == 0.0 || profile.duty_cycle == 0.0) return out;

  CounterRng rng(derive_seed(seed, Stream::kApplication));
  const bool always_on = profile.duty_cycle >= 1.0;
  const double on_mean = profile.duty_cycle * profile.cycle_s;
  const double off_mean = (1.0 - profile.duty_cycle) * profile.cycle_s;

  // Start in the stationary on/off state.
  bool on = always_on || rng.bernoulli(profile.duty_cycle);
  double period_end = always_on ? std::numeric_limits<double>::infinity()
                                : rng.exponential(1.0 / (on ? on_mean : off_mean));
  double t = 0.0;
  while (t < window_s) {
    if (!on) {
      t = period_end;
      on = true;
      period_end = t + rng.exponential(1.0 / on_mean);
      continue;
    }
    const double next = t + rng.exponential(profile.burst_rate_hz);
    if (next >= period_end) {
      // Poisson arrivals are memoryless: resume the stream at the next on period.
      t = period_end;
      on = false;
      period_end = t + rng.exponential(1.0 / off_mean);
      continue;
    }
    t = next;
    if (t >= window_s) break;
    MessageEvent e;
    e.time_s = t;
    e.size_bytes = detail::draw_size(profile.sizes, rng);
    e.direction = rng.bernoulli(profile.up_fraction) ? Direction::kUp : Direction::kDown;
    out.events.push_back(e);
  }
  return out;
}

// Illustrative archetypes: only their ordering relations matter (video moves
// far more bytes than web, chat is balanced, bulk is downstream-heavy).
inline std::map<std::string, TrafficProfile> preset_profiles() {
  std::map<std::string, TrafficProfile> presets;
  presets["video"] = TrafficProfile{ClassKind::kVideo, 6.0, LognormalSize{std::log(8500.0), 0.6},
                                    0.1, 1.0, 1.0};
  presets["web"] = TrafficProfile{ClassKind::kWeb, 6.0, TruncatedParetoSize{1.5, 300.0, 60000.0},
                                  0.35, 0.4, 2.5};
  presets["chat"] = TrafficProfile{ClassKind::kChat, 1.5, FixedSize{180.0}, 0.5, 1.0, 1.0};
  presets["bulk"] = TrafficProfile{ClassKind::kBulk, 12.0, LognormalSize{std::log(16000.0), 0.3},
                                   0.02, 1.0, 1.0};
  return presets;
}

}  // namespace sclab
