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
#include <span>
#include <string_view>

namespace sclab {

// Two-sided 99% standard normal quantile.
inline constexpr double kZ99 = 2.5758293035489004;

// Point estimate with a 99% interval.
struct Estimate {
  double point = 0.0;
  double lo = 0.0;
  double hi = 0.0;
  std::size_t n = 0;

  bool contains(double v) const noexcept { return lo <= v && v <= hi; }
  double half_width() const noexcept { return 0.5 * (hi - lo); }
};

// Trials `first .. first + count - 1` derived from `master`.
struct SeedRange {
  std::uint64_t master = 0;
  std::uint64_t first = 0;
  std::uint64_t count = 0;
};

enum class EstimateStatus : std::uint8_t { kOk, kDegenerate, kUnidentifiable };

constexpr std::string_view to_string(EstimateStatus s) noexcept {
  switch (s) {
    case EstimateStatus::kOk: return "ok";
    case EstimateStatus::kDegenerate: return "degenerate";
    case EstimateStatus::kUnidentifiable: return "unidentifiable";
  }
  return "ok";
}

// Monte Carlo estimate of a model parameter. An unidentifiable estimate
// carries no number: point and lo are 0 and consumers must check `status`.
struct PairEstimate {
  double point = 0.0;
  double lo = 0.0;
  double hi = 0.0;
  std::size_t n = 0;
  SeedRange seeds;
  EstimateStatus status = EstimateStatus::kOk;

  bool identifiable() const noexcept { return status != EstimateStatus::kUnidentifiable; }
  bool excludes_zero() const noexcept { return lo > 0.0; }
};

struct Moments {
  double mean = 0.0;
  double variance = 0.0;  // unbiased; 0 for fewer than two values
  std::size_t n = 0;

  double standard_error() const noexcept {
    return n > 0 ? std::sqrt(variance / static_cast<double>(n)) : 0.0;
  }
};

// Two-pass mean and variance, summed in input order. Constant samples give
// their value and variance 0 exactly.
inline Moments moments(std::span<const double> v) {
  Moments m;
  m.n = v.size();
  if (v.empty()) return m;
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  if (*lo == *hi) {
    m.mean = *lo;
    return m;
  }
  double s = 0.0;
  for (double x : v) s += x;
  m.mean = s / static_cast<double>(v.size());
  if (v.size() > 1) {
    double ss = 0.0;
    for (double x : v) ss += (x - m.mean) * (x - m.mean);
    m.variance = ss / static_cast<double>(v.size() - 1);
  }
  return m;
}

// Normal interval for a mean.
inline Estimate mean_estimate(std::span<const double> v) {
  const auto m = moments(v);
  const double hw = kZ99 * m.standard_error();
  return Estimate{m.mean, m.mean - hw, m.mean + hw, m.n};
}

}  // namespace sclab
