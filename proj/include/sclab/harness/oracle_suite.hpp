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
#include <string>
#include <vector>

#include "sclab/bounds.hpp"
#include "sclab/discrete_channel.hpp"
#include "sclab/harness/scenario.hpp"
#include "sclab/random.hpp"

namespace sclab::harness {

// One inequality checked over every sampled instance. `worst` is the largest
// amount by which the bound side exceeded the truth side (<= 0 when it held).
struct OracleCheck {
  std::string name;
  std::size_t instances = 0;
  std::size_t violations = 0;
  double worst = -std::numeric_limits<double>::infinity();

  void record(double excess, double tol) {
    ++instances;
    worst = std::max(worst, excess);
    if (excess > tol) ++violations;
  }
};

struct OracleSuiteResult {
  std::size_t channels = 0;
  std::size_t statistics = 0;
  std::vector<OracleCheck> checks;

  std::size_t violations() const {
    std::size_t v = 0;
    for (const auto& c : checks) v += c.violations;
    return v;
  }
  bool ok() const { return violations() == 0; }
};

inline constexpr double kOracleTolerance = 1e-12;

// Samples random two-input channels and bounded statistics on their output
// alphabet, and checks every inequality of the library against the exact
// quantities of each channel.
inline OracleSuiteResult run_oracle_suite(const OracleConfig& cfg, std::uint64_t seed) {
  detail::require(cfg.instances >= 1, "oracle.instances", "must be >= 1");
  detail::require(cfg.max_outputs >= 2, "oracle.max_outputs", "must be >= 2");
  OracleSuiteResult res;
  OracleCheck expectation{"expectation_gap_le_2tv"};
  OracleCheck mi_tv{"mi_ge_tv_bound"};
  OracleCheck acc{"accuracy_eq_half_one_plus_tv"};
  OracleCheck bh_tv{"tv_le_bhattacharyya_envelope"};
  OracleCheck ch_bh{"chernoff_ge_bhattacharyya"};
  OracleCheck bh_lb{"bhattacharyya_ge_tv_chernoff_bound"};
  OracleCheck th_tv{"report_tv_le_exact"};
  OracleCheck th_mi{"report_mi_le_exact"};
  OracleCheck th_acc{"report_accuracy_le_exact"};

  for (std::size_t i = 0; i < cfg.instances; ++i) {
    CounterRng rng(derive_seed(seed, Stream::kSampler, i));
    const std::size_t out = 2 + rng.below(cfg.max_outputs - 1);
    const double sparsity = rng.bernoulli(0.3) ? 0.3 : 0.0;
    const auto ch = random_channel(rng, 2, out, sparsity);
    const auto p = ch.row(0);
    const auto q = ch.row(1);
    const double tv = exact_tv(ch, 0, 1);
    const double mi = exact_mi(ch);
    const double pi0 = ch.priors()[0];
    const double pi1 = ch.priors()[1];
    const double acc_exact = 1.0 - exact_bayes_error(ch.with_priors({0.5, 0.5}));
    const auto cher = exact_chernoff(p, q);
    const auto bh = bhattacharyya(p, q);
    ++res.channels;

    mi_tv.record((2.0 / kLn2) * pi0 * pi1 * tv * tv - mi, kOracleTolerance);
    acc.record(std::fabs(acc_exact - accuracy_from_tv(tv)), kOracleTolerance);
    bh_tv.record(tv - std::sqrt(std::max(0.0, 1.0 - bh.coefficient * bh.coefficient)), kOracleTolerance);
    if (!cher.zero_overlap) ch_bh.record(bh.distance_nats - cher.nats, kOracleTolerance);
    else ch_bh.record(-std::numeric_limits<double>::infinity(), kOracleTolerance);
    if (tv < 1.0) bh_lb.record(chernoff_lower_bound_from_tv(tv) - bh.distance_nats, kOracleTolerance);

    // Statistic gaps: the optimal +-1 test first, then random ones in [-1, 1].
    auto check_statistic = [&](const std::vector<double>& f) {
      double gap = 0.0;
      for (std::size_t y = 0; y < out; ++y) gap += f[y] * (p[y] - q[y]);
      gap = std::min(std::fabs(gap), 2.0);
      expectation.record(gap - 2.0 * tv, kOracleTolerance);
      // Dressed as a chain whose layers do not move: C = 0, rho = 1, L = M = 1.
      const auto r = build_report(BoundInputs{gap, 0.0, 1.0, 1.0, 1.0, pi0, pi1});
      th_tv.record(r.tv_lb - tv, kOracleTolerance);
      th_mi.record(r.mi_lb_bits - mi, kOracleTolerance);
      th_acc.record(r.acc_lb - acc_exact, kOracleTolerance);
      ++res.statistics;
    };
    std::vector<double> f(out);
    for (std::size_t y = 0; y < out; ++y) f[y] = p[y] > q[y] ? 1.0 : (p[y] < q[y] ? -1.0 : 0.0);
    check_statistic(f);
    for (std::size_t s = 0; s < cfg.statistics_per_channel; ++s) {
      for (auto& v : f) v = rng.uniform(-1.0, 1.0);
      check_statistic(f);
    }
  }
  res.checks = {expectation, mi_tv, acc, bh_tv, ch_bh, bh_lb, th_tv, th_mi, th_acc};
  return res;
}

}  // namespace sclab::harness
