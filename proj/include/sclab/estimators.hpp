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
#include <map>
#include <span>
#include <utility>
#include <vector>

#include "sclab/channel_ops.hpp"
#include "sclab/errors.hpp"
#include "sclab/estimate.hpp"
#include "sclab/parallel.hpp"
#include "sclab/random.hpp"
#include "sclab/trajectory_space.hpp"
#include "sclab/traffic_model.hpp"

namespace sclab {

// Anything that runs one session of a label through the chain.
template <class S>
concept TrialSampler = requires(const S& s, const SemanticLabel& label, std::uint64_t seed) {
  { s(label, seed) } -> std::convertible_to<ChainTrace>;
};

// Draws sessions from per-label traffic profiles through a fixed chain.
struct ProfileSampler {
  std::map<int, TrafficProfile> profiles;  // keyed by label id
  ChainConfig chain;
  double window_s = 10.0;

  ChainTrace operator()(const SemanticLabel& label, std::uint64_t seed) const {
    const auto it = profiles.find(label.id);
    detail::require(it != profiles.end(), "profiles", "no profile for label '" + label.name + "'");
    return run_chain(label, it->second, chain, window_s, seed);
  }
};

// Seed of trial `t` for `label_id`. Labels draw from disjoint streams.
constexpr std::uint64_t trial_seed(std::uint64_t master, int label_id, std::uint64_t t) noexcept {
  return derive_seed(derive_seed(master, Stream::kTrial, static_cast<std::uint64_t>(label_id)),
                     Stream::kTrial, t);
}

// Runs `n` trials of `label` and maps each trace through `extract`.
template <TrialSampler S, class F>
auto collect(const S& sampler, const SemanticLabel& label, std::size_t n, std::uint64_t master,
             F extract, unsigned threads = 1) {
  return parallel_map(n, threads, [&](std::size_t t) {
    return extract(sampler(label, trial_seed(master, label.id, t)));
  });
}

// Per-trial summary that feeds every parameter estimate.
struct TrialRecord {
  double phi_plaintext = 0.0;  // phi(e_P(Xi_P))
  double phi_arrival = 0.0;    // phi(e_N(Xi_N))
  double psi = 0.0;            // psi(Y)
  double distance = 0.0;       // d(z_P, z_N) on the same session
};

struct StatisticBundle {
  StatisticDescriptor phi;
  ObservationStatistic psi;
  MetricConfig metric;
  double window_s = 10.0;
};

inline TrialRecord summarize(const ChainTrace& trace, const StatisticBundle& b) {
  const auto zp = embed(trace.plaintext, b.window_s);
  const auto zn = embed(trace.arrival, b.window_s);
  return TrialRecord{eval_statistic(b.phi, zp), eval_statistic(b.phi, zn),
                     eval_observation_statistic(b.psi, trace.features), metric_d(zp, zn, b.metric)};
}

template <TrialSampler S>
std::vector<TrialRecord> collect_records(const S& sampler, const SemanticLabel& label,
                                         std::size_t n, std::uint64_t master,
                                         const StatisticBundle& b, unsigned threads = 1) {
  return collect(sampler, label, n, master,
                 [&b](const ChainTrace& tr) { return summarize(tr, b); }, threads);
}

template <class Member>
std::vector<double> column(std::span<const TrialRecord> rs, Member m) {
  std::vector<double> out;
  out.reserve(rs.size());
  for (const auto& r : rs) out.push_back(r.*m);
  return out;
}

namespace detail {

inline void require_estimable(std::size_t n, std::span<const SemanticLabel> labels) {
  require(n >= 100, "trials", "parameter estimation needs at least 100 trials");
  for (const auto& l : labels)
    require(l.prior > 0.0, "prior[" + l.name + "]", "labels used in a bound need prior > 0");
}

// Signed gap of two sample means with a normal 99% interval.
inline Estimate signed_gap(std::span<const double> a, std::span<const double> b) {
  const auto ma = moments(a);
  const auto mb = moments(b);
  const double g = ma.mean - mb.mean;
  const double se = std::sqrt(ma.variance / static_cast<double>(ma.n) +
                              mb.variance / static_cast<double>(mb.n));
  return Estimate{g, g - kZ99 * se, g + kZ99 * se, ma.n + mb.n};
}

}  // namespace detail

// |mean(a) - mean(b)| with the interval folded through |.|: when the signed
// interval straddles 0 the lower end is 0.
inline PairEstimate absolute_gap(std::span<const double> a, std::span<const double> b,
                                 SeedRange seeds = {}) {
  detail::require(a.size() >= 2 && b.size() >= 2, "samples", "need at least 2 samples per label");
  const auto g = detail::signed_gap(a, b);
  PairEstimate e;
  e.point = std::fabs(g.point);
  if (g.lo <= 0.0 && g.hi >= 0.0) {
    e.lo = 0.0;
    e.hi = std::max(-g.lo, g.hi);
  } else {
    e.lo = std::min(std::fabs(g.lo), std::fabs(g.hi));
    e.hi = std::max(std::fabs(g.lo), std::fabs(g.hi));
  }
  e.n = g.n;
  e.seeds = seeds;
  if (g.point == 0.0 && g.lo == g.hi) e.status = EstimateStatus::kDegenerate;
  return e;
}

// Largest per-label mean with interval [max lo, max hi].
inline PairEstimate max_of_means(std::span<const std::vector<double>> per_label, SeedRange seeds = {}) {
  detail::require(!per_label.empty(), "labels", "need at least one label");
  PairEstimate e;
  e.point = e.lo = e.hi = -std::numeric_limits<double>::infinity();
  for (const auto& v : per_label) {
    const auto m = mean_estimate(v);
    e.point = std::max(e.point, m.point);
    e.lo = std::max(e.lo, m.lo);
    e.hi = std::max(e.hi, m.hi);
    e.n += m.n;
  }
  e.lo = std::max(e.lo, 0.0);
  e.seeds = seeds;
  return e;
}

// Ratio of numerator gap to denominator gap on matched samples (trial i of a
// label yields both values), by the delta method, clipped to [0, 1].
inline PairEstimate gap_ratio(std::span<const double> num_a, std::span<const double> den_a,
                              std::span<const double> num_b, std::span<const double> den_b,
                              SeedRange seeds = {}) {
  detail::require(num_a.size() == den_a.size() && num_b.size() == den_b.size(), "samples",
                  "ratio needs matched samples");
  PairEstimate e;
  e.n = num_a.size() + num_b.size();
  e.seeds = seeds;
  const auto den = detail::signed_gap(den_a, den_b);
  if (den.lo <= 0.0 && den.hi >= 0.0) {
    e.status = EstimateStatus::kUnidentifiable;
    e.hi = 1.0;
    return e;
  }
  const auto num = detail::signed_gap(num_a, num_b);
  const double r = num.point / den.point;
  auto residual = [r](std::span<const double> n, std::span<const double> d) {
    std::vector<double> out(n.size());
    for (std::size_t i = 0; i < n.size(); ++i) out[i] = n[i] - r * d[i];
    return out;
  };
  const auto ra = moments(residual(num_a, den_a));
  const auto rb = moments(residual(num_b, den_b));
  const double se = std::sqrt(ra.variance / static_cast<double>(ra.n) +
                              rb.variance / static_cast<double>(rb.n)) /
                    std::fabs(den.point);
  const double a = std::fabs(r);
  e.point = std::min(a, 1.0);
  e.lo = std::clamp(a - kZ99 * se, 0.0, 1.0);
  e.hi = std::clamp(a + kZ99 * se, 0.0, 1.0);
  return e;
}

// ---------------------------------------------------------------------------
// Theorem parameters from simulated chains

// Protocol-layer distinguishability |E[phi(z_P)|x] - E[phi(z_P)|x']| on
// independent seeds.
template <TrialSampler S>
PairEstimate estimate_delta_bar(const S& sampler, const std::pair<SemanticLabel, SemanticLabel>& pair,
                                const StatisticDescriptor& phi, double window_s, std::size_t n,
                                std::uint64_t master, unsigned threads = 1) {
  const SemanticLabel labels[] = {pair.first, pair.second};
  detail::require_estimable(n, labels);
  auto phi_p = [&](const ChainTrace& tr) { return eval_statistic(phi, embed(tr.plaintext, window_s)); };
  const auto a = collect(sampler, pair.first, n, master, phi_p, threads);
  const auto b = collect(sampler, pair.second, n, master, phi_p, threads);
  return absolute_gap(a, b, SeedRange{master, 0, n});
}

// max_x E[d(z_P, z_N) | X = x], each session compared with itself.
template <TrialSampler S>
PairEstimate estimate_C(const S& sampler, std::span<const SemanticLabel> labels,
                        const MetricConfig& metric, double window_s, std::size_t n,
                        std::uint64_t master, unsigned threads = 1) {
  detail::require(n >= 100, "trials", "parameter estimation needs at least 100 trials");
  validate(metric);
  auto dist = [&](const ChainTrace& tr) {
    return metric_d(embed(tr.plaintext, window_s), embed(tr.arrival, window_s), metric);
  };
  std::vector<std::vector<double>> per_label;
  for (const auto& l : labels) per_label.push_back(collect(sampler, l, n, master, dist, threads));
  return max_of_means(per_label, SeedRange{master, 0, n});
}

// Share of the arrival-layer gap of phi that survives into psi(Y).
template <TrialSampler S>
PairEstimate estimate_rho(const S& sampler, const std::pair<SemanticLabel, SemanticLabel>& pair,
                          const StatisticDescriptor& phi, const ObservationStatistic& psi,
                          double window_s, std::size_t n, std::uint64_t master, unsigned threads = 1) {
  const SemanticLabel labels[] = {pair.first, pair.second};
  detail::require_estimable(n, labels);
  auto both = [&](const ChainTrace& tr) {
    return std::pair{eval_observation_statistic(psi, tr.features),
                     eval_statistic(phi, embed(tr.arrival, window_s))};
  };
  const auto a = collect(sampler, pair.first, n, master, both, threads);
  const auto b = collect(sampler, pair.second, n, master, both, threads);
  auto split = [](const auto& v) {
    std::pair<std::vector<double>, std::vector<double>> out;
    for (const auto& [y, z] : v) {
      out.first.push_back(y);
      out.second.push_back(z);
    }
    return out;
  };
  const auto [na, da] = split(a);
  const auto [nb, db] = split(b);
  return gap_ratio(na, da, nb, db, SeedRange{master, 0, n});
}

}  // namespace sclab
