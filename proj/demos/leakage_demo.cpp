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

// Walks through one scenario: estimates, the leakage report, per-layer MI,
// then what network jitter does to the guarantee.

#include <cstdio>
#include <iostream>

#include <fmt/format.h>

#include "sclab/sclab.hpp"

int main() {
  using namespace sclab;
  using namespace sclab::harness;

  auto c = default_scenario();
  c.trials = 2000;
  const auto r = run_scenario(c, resolve_threads(0));
  std::cout << report_text(r) << '\n';

  fmt::print("mutual information by layer\n");
  for (const auto& l : dpi_check(r).layers)
    fmt::print("  {:<12} {:.4f} bits (+/- {:.4f})\n", l.layer, l.mi.point, l.mi.half_width());

  fmt::print("\njitter_s   C_hi      bound ok   mi_lb (bits)\n");
  for (double jitter : {0.0, 0.005, 0.02, 0.1}) {
    auto j = c;
    j.chain.network.jitter_s = jitter;
    const auto jr = run_scenario(j, resolve_threads(0));
    fmt::print("{:<10} {:<9.4f} {:<10} {:.5f}\n", jitter, jr.C.hi, jr.report.condition_v_ok ? "yes" : "no",
               jr.report.mi_lb_bits);
  }
  return 0;
}
