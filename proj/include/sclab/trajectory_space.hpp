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
#include <concepts>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "sclab/channel_ops.hpp"
#include "sclab/errors.hpp"
#include "sclab/random.hpp"

namespace sclab {

struct TrajectoryPoint {
  double time_s = 0.0;
  std::uint32_t length_bytes = 0;
  Direction direction = Direction::kDown;

  friend bool operator==(const TrajectoryPoint&, const TrajectoryPoint&) = default;
};

// A packet sequence restricted to [0, window] in the layer-independent space.
struct WindowedTrajectory {
  std::vector<TrajectoryPoint> points;  // sorted by time
  double window_s = 10.0;

  std::uint64_t total_bytes() const noexcept {
    std::uint64_t b = 0;
    for (const auto& p : points) b += p.length_bytes;
    return b;
  }

  friend bool operator==(const WindowedTrajectory&, const WindowedTrajectory&) = default;
};

// e_P / e_N: truncation to [0, window]; the layer tag is dropped.
inline WindowedTrajectory embed(const MarkedPacketSequence& pkts, double window_s) {
  detail::require(std::isfinite(window_s) && window_s > 0.0, "window_s", "must be > 0");
  WindowedTrajectory z;
  z.window_s = window_s;
  z.points.reserve(pkts.packets.size());
  for (const auto& p : pkts.packets) {
    if (p.time_s >= 0.0 && p.time_s <= window_s)
      z.points.push_back({p.time_s, p.length_bytes, p.direction});
  }
  std::stable_sort(z.points.begin(), z.points.end(),
                   [](const auto& a, const auto& b) { return a.time_s < b.time_s; });
  return z;
}

inline WindowedTrajectory embed(const WindowedTrajectory& z, double window_s) {
  detail::require(std::isfinite(window_s) && window_s > 0.0, "window_s", "must be > 0");
  WindowedTrajectory out;
  out.window_s = window_s;
  for (const auto& p : z.points)
    if (p.time_s >= 0.0 && p.time_s <= window_s) out.points.push_back(p);
  return out;
}

// Weights of the trajectory deviation d. Packets are matched by index after
// time-sorting. A matched pair costs
//   min(w_len |dl| / S_cap + w_time |dt| + w_dir [dir differs], 2 w_cnt)
// and every unmatched packet costs w_cnt. The cap keeps the triangle
// inequality when counts differ; with cap_pairs off and w_dir = 0 the plain
// weighted sum is used, which is not a metric for unequal counts.
struct MetricConfig {
  double w_len = 1.0;
  double w_cnt = 0.05;
  double w_time = 0.1;
  double w_dir = 0.05;
  double s_cap_bytes = 1e6;
  // Largest packet length the space admits; enters the Lipschitz constants.
  double max_packet_bytes = 9000.0;
  bool cap_pairs = true;
};

inline void validate(const MetricConfig& m) {
  detail::require_non_negative(m.w_len, "w_len");
  detail::require_non_negative(m.w_cnt, "w_cnt");
  detail::require_non_negative(m.w_time, "w_time");
  detail::require_non_negative(m.w_dir, "w_dir");
  detail::require(m.w_len + m.w_cnt + m.w_time + m.w_dir > 0.0, "weights", "must not all be zero");
  detail::require(std::isfinite(m.s_cap_bytes) && m.s_cap_bytes > 0.0, "s_cap_bytes", "must be > 0");
  detail::require(std::isfinite(m.max_packet_bytes) && m.max_packet_bytes >= 1.0,
                  "max_packet_bytes", "must be >= 1");
}

inline double metric_d(const WindowedTrajectory& a, const WindowedTrajectory& b,
                       const MetricConfig& cfg) {
  detail::require(a.window_s == b.window_s, "window_s", "trajectories use different windows");
  const std::size_t n = a.points.size();
  const std::size_t m = b.points.size();
  const std::size_t k = std::min(n, m);
  const double pair_cap =
      cfg.cap_pairs ? 2.0 * cfg.w_cnt : std::numeric_limits<double>::infinity();
  double d = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    const auto& p = a.points[i];
    const auto& q = b.points[i];
    const double dl = std::fabs(static_cast<double>(p.length_bytes) - q.length_bytes);
    double c = cfg.w_len * dl / cfg.s_cap_bytes + cfg.w_time * std::fabs(p.time_s - q.time_s);
    if (p.direction != q.direction) c += cfg.w_dir;
    d += std::min(c, pair_cap);
  }
  d += cfg.w_cnt * static_cast<double>(std::max(n, m) - k);
  return d;
}

// ---------------------------------------------------------------------------
// Bounded statistics

enum class StatisticKind : std::uint8_t { kClippedTotalBytes, kUpdownBalance, kClippedMeanGap };

constexpr std::string_view to_string(StatisticKind k) noexcept {
  switch (k) {
    case StatisticKind::kClippedTotalBytes: return "clipped_total_bytes";
    case StatisticKind::kUpdownBalance: return "updown_balance";
    case StatisticKind::kClippedMeanGap: return "clipped_mean_gap";
  }
  return "?";
}

inline StatisticKind parse_statistic_kind(std::string_view s) {
  for (auto k : {StatisticKind::kClippedTotalBytes, StatisticKind::kUpdownBalance,
                 StatisticKind::kClippedMeanGap}) {
    if (to_string(k) == s) return k;
  }
  throw ValidationError("statistic", "unknown statistic '" + std::string(s) + "'");
}

// Shape parameters shared by phi (on trajectories) and psi (on features).
struct StatisticShape {
  StatisticKind kind = StatisticKind::kClippedTotalBytes;
  double s_cap_bytes = 1e6;  // clipped_total_bytes saturation
  double g_cap_s = 1.0;      // clipped_mean_gap saturation
};

// phi : Z -> [-M, M] with a declared Lipschitz constant relative to a metric.
struct StatisticDescriptor {
  StatisticShape shape;
  double bound_m = 1.0;
  double lipschitz = 0.0;
};

// Unit-scale forms (values in [-1, 1]) from window summaries.
namespace detail {

inline double unit_total_bytes(double bytes, std::uint64_t count, double s_cap) {
  if (count == 0) return -1.0;
  return std::clamp(2.0 * bytes / s_cap - 1.0, -1.0, 1.0);
}

inline double unit_updown(std::uint64_t up, std::uint64_t down) {
  return (static_cast<double>(up) - static_cast<double>(down)) /
         (static_cast<double>(up + down) + 1.0);
}

inline double unit_mean_gap(double mean_gap, std::uint64_t count, double g_cap) {
  if (count < 2) return -1.0;
  return std::clamp(2.0 * mean_gap / g_cap - 1.0, -1.0, 1.0);
}

inline double unit_statistic(const StatisticShape& s, const WindowedTrajectory& z) {
  switch (s.kind) {
    case StatisticKind::kClippedTotalBytes:
      return unit_total_bytes(static_cast<double>(z.total_bytes()), z.points.size(), s.s_cap_bytes);
    case StatisticKind::kUpdownBalance: {
      std::uint64_t up = 0;
      for (const auto& p : z.points) up += p.direction == Direction::kUp;
      return unit_updown(up, z.points.size() - up);
    }
    case StatisticKind::kClippedMeanGap: {
      const auto n = z.points.size();
      if (n < 2) return -1.0;
      const double span = z.points.back().time_s - z.points.front().time_s;
      return unit_mean_gap(span / static_cast<double>(n - 1), n, s.g_cap_s);
    }
  }
  return 0.0;
}

}  // namespace detail

// Analytic Lipschitz constant of the M-scaled statistic with respect to d.
//
//   clipped_total_bytes: |dphi| <= (2M/S_stat)|dB|. Matched pairs give
//     |dB| <= (S_metric/w_len) d; an unmatched or capped pair moves at most
//     max_packet_bytes for cost >= w_cnt. Hence
//     L = (2M/S_stat) max(S_metric/w_len, max_packet_bytes/w_cnt).
//   updown_balance: one direction flip moves the value by 2/(n+1) <= 1 for
//     cost >= min(w_dir, 2 w_cnt); one insertion moves it by at most 1/2 for
//     cost w_cnt. Hence L = M max(1/w_dir, 1/(2 w_cnt)).
//   clipped_mean_gap: with equal counts |dgap| <= |dt_first| + |dt_last|;
//     any count change moves at most 2M for cost >= w_cnt. Hence
//     L = max(2M/(G_cap w_time), 2M/w_cnt).
// A zero weight makes the corresponding constant infinite.
inline double analytic_lipschitz(const StatisticShape& s, double bound_m, const MetricConfig& m) {
  constexpr double kInf = std::numeric_limits<double>::infinity();
  auto inv = [](double w) { return w > 0.0 ? 1.0 / w : kInf; };
  switch (s.kind) {
    case StatisticKind::kClippedTotalBytes:
      return 2.0 * bound_m / s.s_cap_bytes *
             std::max(m.s_cap_bytes * inv(m.w_len), m.max_packet_bytes * inv(m.w_cnt));
    case StatisticKind::kUpdownBalance:
      return bound_m * std::max(inv(m.w_dir), 0.5 * inv(m.w_cnt));
    case StatisticKind::kClippedMeanGap:
      return 2.0 * bound_m * std::max(inv(s.g_cap_s * m.w_time), inv(m.w_cnt));
  }
  return kInf;
}

inline void validate(const StatisticDescriptor& d) {
  detail::require(std::isfinite(d.bound_m) && d.bound_m > 0.0, "bound_m", "must be > 0");
  detail::require(std::isfinite(d.shape.s_cap_bytes) && d.shape.s_cap_bytes > 0.0, "s_cap_bytes",
                  "must be > 0");
  detail::require(std::isfinite(d.shape.g_cap_s) && d.shape.g_cap_s > 0.0, "g_cap_s", "must be > 0");
  detail::require(std::isfinite(d.lipschitz) && d.lipschitz > 0.0, "lipschitz",
                  "must be finite and > 0 (is a metric weight zero?)");
}

// Descriptor carrying the analytic constant for `metric`.
inline StatisticDescriptor make_statistic(StatisticShape shape, const MetricConfig& metric,
                                          double bound_m = 1.0) {
  validate(metric);
  StatisticDescriptor d{shape, bound_m, analytic_lipschitz(shape, bound_m, metric)};
  validate(d);
  return d;
}

// Values lie in [-M, M]. Empty windows map to -M (bytes, gap) and 0 (balance).
inline double eval_statistic(const StatisticDescriptor& desc, const WindowedTrajectory& z) {
  return desc.bound_m * detail::unit_statistic(desc.shape, z);
}

// psi : Y -> [-1, 1], same functional forms evaluated on observed aggregates.
struct ObservationStatistic {
  StatisticShape shape;
};

inline double eval_observation_statistic(const ObservationStatistic& psi, const FeatureRecord& y) {
  detail::require(y.aggregates.has_value(), "aggregates",
                  std::string(to_string(psi.shape.kind)) + " requires window aggregates");
  const auto& a = *y.aggregates;
  switch (psi.shape.kind) {
    case StatisticKind::kClippedTotalBytes:
      return detail::unit_total_bytes(static_cast<double>(a.total_bytes), a.packet_count,
                                      psi.shape.s_cap_bytes);
    case StatisticKind::kUpdownBalance:
      return detail::unit_updown(a.up_count, a.down_count);
    case StatisticKind::kClippedMeanGap:
      return detail::unit_mean_gap(a.mean_interarrival_s, a.packet_count, psi.shape.g_cap_s);
  }
  return 0.0;
}

// ---------------------------------------------------------------------------
// Empirical Lipschitz certificate

template <class S>
concept TrajectoryPairSampler = requires(S& s, CounterRng& rng) {
  { s(rng) } -> std::convertible_to<std::pair<WindowedTrajectory, WindowedTrajectory>>;
};

// Mixes independent pairs with single-coordinate perturbations (one length,
// one time, one direction flip, one insertion or deletion) so that every
// branch of each analytic bound is probed.
struct PerturbationSampler {
  double window_s = 10.0;
  double max_packet_bytes = 9000.0;
  std::size_t max_packets = 240;

  WindowedTrajectory random_trajectory(CounterRng& rng) const {
    WindowedTrajectory z;
    z.window_s = window_s;
    const auto n = rng.below(max_packets + 1);
    for (std::uint64_t i = 0; i < n; ++i) {
      z.points.push_back({rng.uniform(0.0, window_s),
                          static_cast<std::uint32_t>(1 + rng.below(static_cast<std::uint64_t>(max_packet_bytes))),
                          rng.bernoulli(0.5) ? Direction::kUp : Direction::kDown});
    }
    std::sort(z.points.begin(), z.points.end(),
              [](const auto& a, const auto& b) { return a.time_s < b.time_s; });
    return z;
  }

  std::pair<WindowedTrajectory, WindowedTrajectory> operator()(CounterRng& rng) const {
    WindowedTrajectory a = random_trajectory(rng);
    const auto mode = rng.below(6);
    if (mode == 0 || a.points.empty()) return {a, random_trajectory(rng)};
    WindowedTrajectory b = a;
    auto& pts = b.points;
    const auto i = rng.below(pts.size());
    switch (mode) {
      case 1: {
        const double scale = rng.bernoulli(0.5) ? 1.0 : 0.01;
        const double len = std::clamp(pts[i].length_bytes + scale * rng.normal() * max_packet_bytes,
                                      1.0, max_packet_bytes);
        pts[i].length_bytes = static_cast<std::uint32_t>(len);
        break;
      }
      case 2: {
        // Perturb an endpoint time without changing the order.
        const bool last = rng.bernoulli(0.5);
        const std::size_t j = last ? pts.size() - 1 : 0;
        const double lo = last && pts.size() > 1 ? pts[j - 1].time_s : 0.0;
        const double hi = !last && pts.size() > 1 ? pts[1].time_s : window_s;
        pts[j].time_s = rng.uniform(lo, hi);
        break;
      }
      case 3:
        pts[i].direction = pts[i].direction == Direction::kUp ? Direction::kDown : Direction::kUp;
        break;
      case 4:
        pts.erase(pts.begin() + static_cast<std::ptrdiff_t>(pts.size() - 1));
        break;
      default: {
        TrajectoryPoint extra{rng.uniform(pts.back().time_s, window_s),
                              static_cast<std::uint32_t>(1 + rng.below(static_cast<std::uint64_t>(max_packet_bytes))),
                              rng.bernoulli(0.5) ? Direction::kUp : Direction::kDown};
        pts.push_back(extra);
        break;
      }
    }
    return {a, b};
  }
};

struct LipschitzCertificate {
  double max_ratio = 0.0;
  double declared = 0.0;
  std::size_t pairs_used = 0;  // pairs with d > 0
  bool passes = false;
};

// Largest observed |phi(z) - phi(z')| / d(z, z') over `trials` sampled pairs.
template <TrajectoryPairSampler Sampler>
LipschitzCertificate lipschitz_certificate(const StatisticDescriptor& desc, const MetricConfig& metric,
                                           Sampler&& sampler, std::size_t trials,
                                           std::uint64_t seed) {
  validate(metric);
  LipschitzCertificate cert;
  cert.declared = desc.lipschitz;
  CounterRng rng(derive_seed(seed, Stream::kSampler));
  for (std::size_t t = 0; t < trials; ++t) {
    const auto [a, b] = sampler(rng);
    const double d = metric_d(a, b, metric);
    if (d <= 0.0) continue;
    ++cert.pairs_used;
    const double ratio = std::fabs(eval_statistic(desc, a) - eval_statistic(desc, b)) / d;
    cert.max_ratio = std::max(cert.max_ratio, ratio);
  }
  if (cert.pairs_used == 0)
    throw ValidationError("sampler", "degenerate sample: every pair had d = 0");
  cert.passes = cert.max_ratio <= desc.lipschitz * (1.0 + 1e-9);
  return cert;
}

}  // namespace sclab
