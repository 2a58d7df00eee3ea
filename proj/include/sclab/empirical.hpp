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
#include <map>
#include <span>
#include <vector>

#include "sclab/errors.hpp"
#include "sclab/estimate.hpp"

namespace sclab {

// Cube-root rule clipped to [2, 256].
inline std::size_t default_bin_count(std::size_t n) {
  const auto b = static_cast<std::size_t>(std::ceil(std::cbrt(static_cast<double>(n))));
  return std::clamp<std::size_t>(b, 2, 256);
}

// Equal-width bins on [lo, hi]; out-of-range values land in the edge bins.
struct BinGrid {
  double lo = 0.0;
  double hi = 1.0;
  std::size_t bins = 2;

  std::size_t index(double v) const noexcept {
    if (!(hi > lo)) return 0;
    const double pos = (v - lo) / (hi - lo) * static_cast<double>(bins);
    if (!(pos > 0.0)) return 0;
    return std::min(static_cast<std::size_t>(pos), bins - 1);
  }
};

inline BinGrid grid_spanning(std::initializer_list<std::span<const double>> sets, std::size_t bins) {
  detail::require(bins >= 2, "bins", "need at least 2 bins");
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (auto s : sets)
    for (double v : s) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  if (!(lo <= hi)) lo = hi = 0.0;
  return BinGrid{lo, hi, bins};
}

inline std::vector<double> histogram_pmf(std::span<const double> values, const BinGrid& g) {
  std::vector<double> pmf(g.bins, 0.0);
  for (double v : values) pmf[g.index(v)] += 1.0;
  for (auto& p : pmf) p /= static_cast<double>(values.size());
  return pmf;
}

// Per-label counts over a shared grid. Labels are dense indices 0..k-1.
struct BinnedFeature {
  BinGrid grid;
  std::vector<std::vector<std::uint64_t>> counts;

  std::uint64_t mass(std::size_t label) const {
    std::uint64_t m = 0;
    for (auto c : counts[label]) m += c;
    return m;
  }
};

// ½ Σ_b |p̂_b - q̂_b| on shared equal-width bins spanning both samples.
inline double empirical_tv(std::span<const double> a, std::span<const double> b, std::size_t bins) {
  detail::require(bins >= 2, "bins", "need at least 2 bins");
  detail::require(!a.empty() && !b.empty(), "samples", "both sample sets must be non-empty");
  const auto g = grid_spanning({a, b}, bins);
  const auto p = histogram_pmf(a, g);
  const auto q = histogram_pmf(b, g);
  double s = 0.0;
  for (std::size_t i = 0; i < g.bins; ++i) s += std::fabs(p[i] - q[i]);
  return 0.5 * s;
}

// Empirical TV with a normal-approximation interval from per-bin standard
// errors (conservative: errors are added, not pooled).
inline Estimate empirical_tv_estimate(std::span<const double> a, std::span<const double> b,
                                      std::size_t bins) {
  const double tv = empirical_tv(a, b, bins);
  const auto g = grid_spanning({a, b}, bins);
  const auto p = histogram_pmf(a, g);
  const auto q = histogram_pmf(b, g);
  double se = 0.0;
  for (std::size_t i = 0; i < g.bins; ++i) {
    se += std::sqrt(p[i] * (1.0 - p[i]) / static_cast<double>(a.size()) +
                    q[i] * (1.0 - q[i]) / static_cast<double>(b.size()));
  }
  const double hw = kZ99 * 0.5 * se;
  return Estimate{tv, std::max(0.0, tv - hw), std::min(1.0, tv + hw), a.size() + b.size()};
}

struct LabeledValue {
  int label = 0;
  double value = 0.0;
};

namespace detail {

// Maps arbitrary label ids to dense indices in ascending id order.
inline std::map<int, std::size_t> dense_labels(std::span<const LabeledValue> s) {
  std::map<int, std::size_t> m;
  for (const auto& v : s) m.emplace(v.label, 0);
  std::size_t i = 0;
  for (auto& [id, idx] : m) idx = i++;
  return m;
}

}  // namespace detail

inline BinnedFeature bin_labeled(std::span<const LabeledValue> samples, std::size_t bins) {
  const auto ids = detail::dense_labels(samples);
  std::vector<double> vals;
  vals.reserve(samples.size());
  for (const auto& s : samples) vals.push_back(s.value);
  BinnedFeature f{grid_spanning({vals}, bins), {}};
  f.counts.assign(ids.size(), std::vector<std::uint64_t>(bins, 0));
  for (const auto& s : samples) f.counts[ids.at(s.label)][f.grid.index(s.value)] += 1;
  return f;
}

// Mutual information (bits) of the table with p(x, b) = w_x · count(x, b) / n_x.
// With w_x = n_x / N this is the plain plug-in estimate.
struct MiEstimate {
  double point = 0.0;
  double lo = 0.0;
  double hi = 0.0;
  double bias = 0.0;  // first-order (Miller-Madow) upward bias, bits
  std::size_t n = 0;

  double half_width() const noexcept { return 0.5 * (hi - lo); }
};

inline MiEstimate mi_from_counts(const BinnedFeature& f, std::span<const double> weights) {
  const std::size_t k = f.counts.size();
  detail::require(weights.size() == k, "weights", "one weight per label required");
  const std::size_t bins = f.grid.bins;
  std::vector<double> mass(k);
  std::size_t total = 0;
  for (std::size_t x = 0; x < k; ++x) {
    mass[x] = static_cast<double>(f.mass(x));
    total += f.mass(x);
  }
  std::vector<double> pb(bins, 0.0);
  for (std::size_t x = 0; x < k; ++x)
    if (mass[x] > 0)
      for (std::size_t b = 0; b < bins; ++b) pb[b] += weights[x] * f.counts[x][b] / mass[x];

  double mi = 0.0;
  double second = 0.0;
  std::size_t used_bins = 0;
  for (std::size_t b = 0; b < bins; ++b) used_bins += pb[b] > 0.0;
  for (std::size_t x = 0; x < k; ++x) {
    if (mass[x] == 0 || weights[x] == 0.0) continue;
    for (std::size_t b = 0; b < bins; ++b) {
      if (f.counts[x][b] == 0) continue;
      const double pcond = f.counts[x][b] / mass[x];
      const double l = std::log2(pcond / pb[b]);
      mi += weights[x] * pcond * l;
      second += weights[x] * pcond * l * l;
    }
  }
  mi = std::max(mi, 0.0);
  std::size_t used_labels = 0;
  for (std::size_t x = 0; x < k; ++x) used_labels += (mass[x] > 0 && weights[x] > 0.0);
  const double n = static_cast<double>(total);
  const double bias = used_bins > 0 && used_labels > 0
                          ? static_cast<double>((used_bins - 1) * (used_labels - 1)) / (2.0 * n * std::log(2.0))
                          : 0.0;
  const double sd = std::sqrt(std::max(0.0, second - mi * mi) / n);
  return MiEstimate{mi, std::max(0.0, mi - bias - kZ99 * sd), mi + kZ99 * sd, bias, total};
}

inline MiEstimate plugin_mi_estimate(std::span<const LabeledValue> samples, std::size_t bins) {
  const auto ids = detail::dense_labels(samples);
  detail::require(ids.size() >= 2, "labels", "plug-in MI needs at least 2 labels");
  const auto f = bin_labeled(samples, bins);
  std::vector<double> w(ids.size());
  for (std::size_t x = 0; x < w.size(); ++x)
    w[x] = static_cast<double>(f.mass(x)) / static_cast<double>(samples.size());
  return mi_from_counts(f, w);
}

// Plug-in I(label; binned value) in bits.
inline double plugin_mi(std::span<const LabeledValue> samples, std::size_t bins) {
  return plugin_mi_estimate(samples, bins).point;
}

// Histogram plug-in Bayes classifier: per-label histograms on the training
// split, argmax of weight · p̂(bin | label) on the holdout. The last
// `holdout_fraction` of each label's samples (input order) form the holdout.
// Ties split credit evenly. Accuracy is Σ_x w_x · acc_x; with empty
// `weights` the training label frequencies are used.
inline Estimate bayes_accuracy(std::span<const LabeledValue> samples, std::size_t bins,
                               double holdout_fraction, std::span<const double> weights = {}) {
  detail::require(holdout_fraction > 0.0 && holdout_fraction < 1.0, "holdout_fraction",
                  "must lie in (0, 1)");
  const auto ids = detail::dense_labels(samples);
  const std::size_t k = ids.size();
  detail::require(k >= 2, "labels", "need at least 2 labels");
  std::vector<std::vector<double>> by_label(k);
  for (const auto& s : samples) by_label[ids.at(s.label)].push_back(s.value);

  std::vector<std::span<const double>> train(k), test(k);
  std::vector<double> all_train;
  for (std::size_t x = 0; x < k; ++x) {
    const auto& v = by_label[x];
    const auto n_test = static_cast<std::size_t>(std::ceil(holdout_fraction * static_cast<double>(v.size())));
    detail::require(n_test >= 1 && n_test < v.size(), "holdout",
                    "every label needs samples in both the training and holdout split");
    train[x] = std::span<const double>(v).first(v.size() - n_test);
    test[x] = std::span<const double>(v).last(n_test);
    all_train.insert(all_train.end(), train[x].begin(), train[x].end());
  }
  std::vector<double> w(k);
  if (weights.empty()) {
    for (std::size_t x = 0; x < k; ++x)
      w[x] = static_cast<double>(train[x].size()) / static_cast<double>(all_train.size());
  } else {
    detail::require(weights.size() == k, "weights", "one weight per label required");
    w.assign(weights.begin(), weights.end());
  }
  const auto g = grid_spanning({all_train}, bins);
  std::vector<std::vector<double>> pmf(k);
  for (std::size_t x = 0; x < k; ++x) pmf[x] = histogram_pmf(train[x], g);

  double acc = 0.0;
  double var = 0.0;
  std::size_t n_test_total = 0;
  for (std::size_t x = 0; x < k; ++x) {
    double correct = 0.0;
    for (double v : test[x]) {
      const auto b = g.index(v);
      double best = -1.0;
      std::size_t ties = 0;
      bool mine = false;
      for (std::size_t c = 0; c < k; ++c) {
        const double score = w[c] * pmf[c][b];
        if (score > best) {
          best = score;
          ties = 1;
          mine = c == x;
        } else if (score == best) {
          ++ties;
          mine = mine || c == x;
        }
      }
      if (mine) correct += 1.0 / static_cast<double>(ties);
    }
    const double nx = static_cast<double>(test[x].size());
    const double ax = correct / nx;
    acc += w[x] * ax;
    var += w[x] * w[x] * ax * (1.0 - ax) / nx;
    n_test_total += test[x].size();
  }
  const double hw = kZ99 * std::sqrt(var);
  return Estimate{acc, std::max(0.0, acc - hw), std::min(1.0, acc + hw), n_test_total};
}

}  // namespace sclab
