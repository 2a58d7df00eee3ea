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

// Reference computations written independently of the library, used as
// ground truth in tests.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

namespace oracle {

// Payload split of one message into packets of capacity mtu - header.
inline std::vector<std::uint32_t> hand_segment(std::uint32_t size, std::uint32_t mtu,
                                               std::uint32_t header) {
  std::vector<std::uint32_t> out;
  const std::uint32_t cap = mtu - header;
  for (std::uint32_t full = size / cap; full > 0; --full) out.push_back(cap);
  if (size % cap) out.push_back(size % cap);
  return out;
}

inline double h2(double p) {
  if (p <= 0.0 || p >= 1.0) return 0.0;
  return -p * std::log2(p) - (1 - p) * std::log2(1 - p);
}

// Closed forms for BSC(p) with equal priors.
struct Bsc {
  double p;
  double tv() const { return std::fabs(1 - 2 * p); }
  double mi() const { return 1 - h2(p); }
  double bayes_error() const { return std::min(p, 1 - p); }
  double chernoff() const { return -std::log(2 * std::sqrt(p * (1 - p))); }
};

inline double binom(int n, int k) {
  double c = 1;
  for (int i = 1; i <= k; ++i) c = c * (n - k + i) / i;
  return c;
}

// Bayes error of n i.i.d. uses of BSC(p < 1/2), equal priors: majority vote,
// ties guessed at random.
inline double bsc_majority_error(double p, int n) {
  double e = 0;
  for (int k = 0; k <= n; ++k) {
    const double mass = binom(n, k) * std::pow(p, k) * std::pow(1 - p, n - k);
    if (2 * k > n) e += mass;
    else if (2 * k == n) e += 0.5 * mass;
  }
  return e;
}

// TV as max_A |P(A) - Q(A)| over every subset A.
inline double tv_over_subsets(const std::vector<double>& p, const std::vector<double>& q) {
  double best = 0;
  const std::uint64_t k = p.size();
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << k); ++mask) {
    double d = 0;
    for (std::uint64_t i = 0; i < k; ++i)
      if (mask >> i & 1) d += p[i] - q[i];
    best = std::max(best, std::fabs(d));
  }
  return best;
}

// Minimum error over every deterministic decision rule y -> x.
inline double bayes_over_rules(const std::vector<double>& priors,
                               const std::vector<std::vector<double>>& rows) {
  const std::size_t nx = priors.size();
  const std::size_t ny = rows[0].size();
  std::vector<std::size_t> rule(ny, 0);
  double best = 1;
  while (true) {
    double correct = 0;
    for (std::size_t y = 0; y < ny; ++y) correct += priors[rule[y]] * rows[rule[y]][y];
    best = std::min(best, 1 - correct);
    std::size_t i = 0;
    while (i < ny && ++rule[i] == nx) rule[i++] = 0;
    if (i == ny) break;
  }
  return best;
}

// I(X;Y) = H(Y) - H(Y|X) in bits.
inline double mi_by_entropies(const std::vector<double>& priors,
                              const std::vector<std::vector<double>>& rows) {
  auto h = [](const std::vector<double>& v) {
    double s = 0;
    for (double x : v)
      if (x > 0) s -= x * std::log2(x);
    return s;
  };
  std::vector<double> py(rows[0].size(), 0.0);
  double cond = 0;
  for (std::size_t x = 0; x < priors.size(); ++x) {
    for (std::size_t y = 0; y < py.size(); ++y) py[y] += priors[x] * rows[x][y];
    cond += priors[x] * h(rows[x]);
  }
  return h(py) - cond;
}

// Chernoff information by a dense lambda grid.
inline double chernoff_dense(const std::vector<double>& p, const std::vector<double>& q,
                             int points = 200001) {
  double best = 1;
  for (int i = 0; i < points; ++i) {
    const double l = static_cast<double>(i) / (points - 1);
    double s = 0;
    for (std::size_t y = 0; y < p.size(); ++y) {
      if (p[y] > 0 && q[y] > 0) s += std::pow(p[y], l) * std::pow(q[y], 1 - l);
      else if (l == 0 && q[y] > 0) s += q[y];
      else if (l == 1 && p[y] > 0) s += p[y];
    }
    best = std::min(best, s);
  }
  return -std::log(best);
}

}  // namespace oracle
