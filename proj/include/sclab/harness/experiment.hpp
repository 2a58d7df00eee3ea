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
#include <optional>
#include <string>
#include <vector>

#include "sclab/bounds.hpp"
#include "sclab/discrete_channel.hpp"
#include "sclab/empirical.hpp"
#include "sclab/estimate.hpp"
#include "sclab/estimators.hpp"
#include "sclab/harness/scenario.hpp"

namespace sclab::harness {

// MI at one layer of the chain.
struct LayerMi {
  std::string layer;
  MiEstimate mi;
};

// A bound compared with the lower end of the matching empirical interval.
struct SoundnessCheck {
  std::string name;
  double bound = 0.0;
  double empirical_lo = 0.0;
  bool ok = true;
};

// Exact quantities, available in oracle mode.
struct OracleTruth {
  double tv = 0.0;
  double mi_bits = 0.0;
  double bayes_accuracy = 0.5;  // equal priors
  double chernoff_nats = 0.0;
};

// Traffic totals that defense efficiency is computed from.
struct TrafficTotals {
  double wire_bytes = 0.0;            // ciphertext bytes, cover included
  double session_mean_arrival = 0.0;  // sum over sessions of mean real arrival time
  std::size_t sessions_with_packets = 0;
};

struct ExperimentResult {
  std::string scenario;
  ScenarioMode mode = ScenarioMode::kTraffic;
  std::uint64_t seed = 0;
  std::size_t trials = 0;
  std::size_t bins = 0;
  double window_s = 0.0;

  PairEstimate delta_bar;
  PairEstimate C;
  PairEstimate rho;
  BoundInputs conservative;  // delta_bar lo, C hi, rho lo
  LeakageReport report;      // from the conservative inputs
  LeakageReport report_point;

  MiEstimate mi;
  Estimate tv;
  Estimate accuracy;  // equal priors
  std::vector<LayerMi> layers;
  bool dpi_ok = true;
  std::vector<SoundnessCheck> checks;
  std::optional<OracleTruth> truth;
  TrafficTotals totals;

  std::size_t violations() const {
    return static_cast<std::size_t>(std::count_if(checks.begin(), checks.end(), [](const auto& c) { return !c.ok; }));
  }
};

// Plug-in MI may rise from one layer to the next by sampling noise alone; a
// rise larger than twice the larger half-width counts as a violation.
inline bool dpi_consistent(const std::vector<LayerMi>& layers) {
  for (std::size_t i = 1; i < layers.size(); ++i) {
    const auto& a = layers[i - 1].mi;
    const auto& b = layers[i].mi;
    if (b.point > a.point + 2.0 * std::max(a.half_width(), b.half_width())) return false;
  }
  return true;
}

namespace detail {

inline std::size_t bins_for(const ScenarioConfig& c, std::size_t samples) {
  return c.bins ? c.bins : default_bin_count(samples);
}

inline std::pair<double, double> pair_priors(const ScenarioConfig& c) {
  return {c.label(c.pair.first).prior, c.label(c.pair.second).prior};
}

// Per-label weights for the pair, normalized; ordered by ascending label id
// to line up with dense label indices.
inline std::vector<double> pair_weights(const ScenarioConfig& c) {
  auto [p, q] = pair_priors(c);
  const double s = p + q;
  if (c.pair.first < c.pair.second) return {p / s, q / s};
  return {q / s, p / s};
}

inline MiEstimate layer_mi(std::span<const double> a, int ida, std::span<const double> b, int idb,
                           std::size_t bins, std::span<const double> weights) {
  std::vector<LabeledValue> s;
  s.reserve(a.size() + b.size());
  for (double v : a) s.push_back({ida, v});
  for (double v : b) s.push_back({idb, v});
  return mi_from_counts(bin_labeled(s, bins), weights);
}

inline void add_checks(ExperimentResult& r) {
  // A vacuous report (0, 0, 1/2) holds for every pair of distributions; only
  // noise could make the comparison fail.
  const bool vacuous = !r.report.condition_v_ok;
  auto check = [&](std::string name, double bound, double lo) {
    r.checks.push_back({std::move(name), bound, lo, vacuous || !(bound > lo)});
  };
  // With an oracle the bound is tight, so the sampled interval would straddle
  // it; the exact values are the reference there.
  if (!r.truth) {
    check("tv", r.report.tv_lb, r.tv.lo);
    check("mi", r.report.mi_lb_bits, r.mi.lo);
    check("accuracy", r.report.acc_lb, r.accuracy.lo);
  } else {
    check("tv_exact", r.report.tv_lb, r.truth->tv);
    check("mi_exact", r.report.mi_lb_bits, r.truth->mi_bits);
    check("accuracy_exact", r.report.acc_lb, r.truth->bayes_accuracy);
  }
}

inline void finish_report(ExperimentResult& r, const ScenarioConfig& c, double L, double M) {
  const auto [p, q] = pair_priors(c);
  r.conservative = BoundInputs{r.delta_bar.lo, r.C.hi, L, r.rho.identifiable() ? r.rho.lo : 0.0, M, p, q};
  r.report = build_report(r.conservative, r.mi.point);
  const BoundInputs point{std::min(r.delta_bar.point, 2.0 * M), r.C.point, L,
                          r.rho.identifiable() ? r.rho.point : 0.0, M, p, q};
  r.report_point = build_report(point, r.mi.point);
  r.dpi_ok = dpi_consistent(r.layers);
  add_checks(r);
}

// Histogram Bayes accuracy directly on discrete output counts.
inline Estimate discrete_accuracy(const std::vector<std::vector<double>>& train,
                                  const std::vector<std::vector<std::uint64_t>>& test) {
  double acc = 0.0;
  double var = 0.0;
  std::size_t n = 0;
  for (std::size_t x = 0; x < 2; ++x) {
    double correct = 0.0;
    double total = 0.0;
    for (std::size_t y = 0; y < test[x].size(); ++y) {
      const double mine = train[x][y];
      const double other = train[1 - x][y];
      const double credit = mine > other ? 1.0 : (mine == other ? 0.5 : 0.0);
      correct += credit * static_cast<double>(test[x][y]);
      total += static_cast<double>(test[x][y]);
    }
    const double ax = correct / total;
    acc += 0.5 * ax;
    var += 0.25 * ax * (1.0 - ax) / total;
    n += static_cast<std::size_t>(total);
  }
  const double hw = kZ99 * std::sqrt(var);
  return Estimate{acc, std::max(0.0, acc - hw), std::min(1.0, acc + hw), n};
}

inline ExperimentResult run_oracle_scenario(const ScenarioConfig& c) {
  const auto ch = c.oracle_channel();
  const std::size_t out = ch.outputs();
  const std::size_t n = c.oracle.samples;
  const auto p = ch.row(0);
  const auto q = ch.row(1);

  ExperimentResult r;
  r.scenario = c.name;
  r.mode = ScenarioMode::kOracle;
  r.seed = c.seed;
  r.trials = n;
  r.bins = out;
  r.window_s = c.window_s;

  // Every sample y is drawn straight from the channel row; trajectories do not
  // move, so C = 0 and rho = 1 exactly. phi is the optimal +-1 test.
  std::vector<std::vector<std::size_t>> ys(2);
  for (std::size_t x = 0; x < 2; ++x) {
    ys[x] = parallel_map(n, 1, [&](std::size_t t) {
      CounterRng rng(trial_seed(c.seed, static_cast<int>(x), t));
      const double u = rng.uniform();
      double acc = 0.0;
      const auto row = ch.row(x);
      for (std::size_t y = 0; y < out; ++y) {
        acc += row[y];
        if (u < acc) return y;
      }
      std::size_t last = out - 1;
      while (last > 0 && row[last] == 0.0) --last;
      return last;
    });
  }
  auto test_value = [&](std::size_t y) { return p[y] > q[y] ? 1.0 : (p[y] < q[y] ? -1.0 : 0.0); };
  std::vector<std::vector<double>> f(2);
  for (std::size_t x = 0; x < 2; ++x)
    for (auto y : ys[x]) f[x].push_back(test_value(y));
  r.delta_bar = absolute_gap(f[0], f[1], SeedRange{c.seed, 0, n});
  r.C = PairEstimate{0.0, 0.0, 0.0, 2 * n, SeedRange{c.seed, 0, n}, EstimateStatus::kDegenerate};
  r.rho = PairEstimate{1.0, 1.0, 1.0, 2 * n, SeedRange{c.seed, 0, n}, EstimateStatus::kOk};
  if (r.delta_bar.status == EstimateStatus::kDegenerate) r.rho.status = EstimateStatus::kUnidentifiable;

  BinnedFeature counts{BinGrid{0.0, static_cast<double>(out - 1), out},
                       std::vector<std::vector<std::uint64_t>>(2, std::vector<std::uint64_t>(out, 0))};
  for (std::size_t x = 0; x < 2; ++x)
    for (auto y : ys[x]) counts.counts[x][y] += 1;
  const std::vector<double> w(ch.priors().begin(), ch.priors().begin() + 2);
  const double ws = w[0] + w[1];
  const std::vector<double> wn{w[0] / ws, w[1] / ws};
  r.mi = mi_from_counts(counts, wn);
  r.layers = {{"observation", r.mi}};

  // TV with per-cell standard errors, as for binned features.
  {
    double tv = 0.0;
    double se = 0.0;
    for (std::size_t y = 0; y < out; ++y) {
      const double a = static_cast<double>(counts.counts[0][y]) / static_cast<double>(n);
      const double b = static_cast<double>(counts.counts[1][y]) / static_cast<double>(n);
      tv += 0.5 * std::fabs(a - b);
      se += std::sqrt(a * (1.0 - a) / static_cast<double>(n) + b * (1.0 - b) / static_cast<double>(n));
    }
    const double hw = kZ99 * 0.5 * se;
    r.tv = Estimate{tv, std::max(0.0, tv - hw), std::min(1.0, tv + hw), 2 * n};
  }
  {
    const auto n_test = static_cast<std::size_t>(std::ceil(c.holdout_fraction * static_cast<double>(n)));
    std::vector<std::vector<double>> train(2, std::vector<double>(out, 0.0));
    std::vector<std::vector<std::uint64_t>> test(2, std::vector<std::uint64_t>(out, 0));
    for (std::size_t x = 0; x < 2; ++x)
      for (std::size_t t = 0; t < n; ++t) {
        if (t < n - n_test) train[x][ys[x][t]] += 1.0;
        else test[x][ys[x][t]] += 1;
      }
    r.accuracy = discrete_accuracy(train, test);
  }
  const auto eq = ch.with_priors({0.5, 0.5});
  r.truth = OracleTruth{exact_tv(ch, 0, 1), exact_mi(ch.inputs() == 2 ? ch.with_priors(wn) : ch),
                        1.0 - exact_bayes_error(eq), exact_chernoff(p, q).nats};
  finish_report(r, c, 1.0, 1.0);
  return r;
}

struct TrialSummary {
  TrialRecord rec;
  double phi_ciphertext = 0.0;
  double wire_bytes = 0.0;
  double mean_real_arrival = 0.0;
  bool has_real = false;
};

inline TrialSummary summarize_trial(const ChainTrace& tr, const StatisticBundle& b) {
  TrialSummary s;
  s.rec = summarize(tr, b);
  s.phi_ciphertext = eval_statistic(b.phi, embed(tr.ciphertext, b.window_s));
  double sum = 0.0;
  std::size_t real = 0;
  for (const auto& p : tr.arrival.packets) {
    s.wire_bytes += p.length_bytes;
    if (!p.cover) {
      sum += p.time_s;
      ++real;
    }
  }
  s.has_real = real > 0;
  if (real) s.mean_real_arrival = sum / static_cast<double>(real);
  return s;
}

inline ExperimentResult run_traffic_scenario(const ScenarioConfig& c, unsigned threads) {
  const ProfileSampler sampler{c.profiles, c.chain, c.window_s};
  const auto phi = c.phi();
  const StatisticBundle bundle{phi, c.psi(), c.metric, c.window_s};
  const std::size_t n = c.trials;
  const auto& la = c.label(c.pair.first);
  const auto& lb = c.label(c.pair.second);
  const SemanticLabel pair_labels[] = {la, lb};
  sclab::detail::require_estimable(n, pair_labels);

  auto run = [&](const SemanticLabel& l) {
    return collect(sampler, l, n, c.seed, [&](const ChainTrace& tr) { return summarize_trial(tr, bundle); },
                   threads);
  };
  const auto a = run(la);
  const auto b = run(lb);
  auto col = [](const std::vector<TrialSummary>& v, auto get) {
    std::vector<double> out;
    out.reserve(v.size());
    for (const auto& s : v) out.push_back(get(s));
    return out;
  };
  auto plaintext = [](const TrialSummary& s) { return s.rec.phi_plaintext; };
  auto ciphertext = [](const TrialSummary& s) { return s.phi_ciphertext; };
  auto arrival = [](const TrialSummary& s) { return s.rec.phi_arrival; };
  auto observed = [](const TrialSummary& s) { return s.rec.psi; };
  auto distance = [](const TrialSummary& s) { return s.rec.distance; };

  ExperimentResult r;
  r.scenario = c.name;
  r.seed = c.seed;
  r.trials = n;
  r.bins = bins_for(c, 2 * n);
  r.window_s = c.window_s;
  const SeedRange seeds{c.seed, 0, n};

  r.delta_bar = absolute_gap(col(a, plaintext), col(b, plaintext), seeds);
  std::vector<std::vector<double>> dist{col(a, distance), col(b, distance)};
  for (const auto& l : c.labels) {
    if (l.id == la.id || l.id == lb.id) continue;
    dist.push_back(collect(sampler, l, n, c.seed,
                           [&](const ChainTrace& tr) { return summarize(tr, bundle).distance; }, threads));
  }
  r.C = max_of_means(dist, seeds);
  r.rho = gap_ratio(col(a, observed), col(a, arrival), col(b, observed), col(b, arrival), seeds);

  const auto w = pair_weights(c);
  auto mi_of = [&](auto get) { return layer_mi(col(a, get), la.id, col(b, get), lb.id, r.bins, w); };
  r.layers = {{"plaintext", mi_of(plaintext)},
              {"ciphertext", mi_of(ciphertext)},
              {"arrival", mi_of(arrival)},
              {"observation", mi_of(observed)}};
  r.mi = r.layers.back().mi;

  const auto ya = col(a, observed);
  const auto yb = col(b, observed);
  r.tv = empirical_tv_estimate(ya, yb, r.bins);
  std::vector<LabeledValue> labeled;
  labeled.reserve(2 * n);
  for (double v : ya) labeled.push_back({la.id, v});
  for (double v : yb) labeled.push_back({lb.id, v});
  const double equal[] = {0.5, 0.5};
  r.accuracy = bayes_accuracy(labeled, r.bins, c.holdout_fraction, equal);

  for (const auto* side : {&a, &b})
    for (const auto& s : *side) {
      r.totals.wire_bytes += s.wire_bytes;
      if (s.has_real) {
        r.totals.session_mean_arrival += s.mean_real_arrival;
        ++r.totals.sessions_with_packets;
      }
    }
  finish_report(r, c, phi.lipschitz, phi.bound_m);
  return r;
}

}  // namespace detail

// One full experiment: parameter estimates, the leakage report built from
// their conservative ends, empirical leakage at the observer and per layer,
// and the soundness comparison between them.
inline ExperimentResult run_scenario(const ScenarioConfig& c, unsigned threads = 1) {
  validate(c);
  return c.mode == ScenarioMode::kOracle ? detail::run_oracle_scenario(c)
                                         : detail::run_traffic_scenario(c, threads);
}

struct DpiCheck {
  std::vector<LayerMi> layers;
  bool ok = true;
};

inline DpiCheck dpi_check(const ExperimentResult& r) { return DpiCheck{r.layers, dpi_consistent(r.layers)}; }

// ---------------------------------------------------------------------------
// Defense sweep

struct EfficiencyMetrics {
  double bandwidth_overhead = 0.0;  // extra wire bytes / undefended wire bytes
  double added_latency_s = 0.0;     // mean shift of real-packet arrival times
  double throughput_ratio = 1.0;    // undefended bytes / defended bytes
};

// Matched-seed comparison of a defended run against the undefended one.
inline EfficiencyMetrics efficiency(const TrafficTotals& defended, const TrafficTotals& baseline) {
  EfficiencyMetrics m;
  if (baseline.wire_bytes > 0.0) {
    m.bandwidth_overhead = std::max(0.0, defended.wire_bytes / baseline.wire_bytes - 1.0);
    m.throughput_ratio = std::min(1.0, baseline.wire_bytes / defended.wire_bytes);
  }
  if (baseline.sessions_with_packets > 0) {
    const double shift = (defended.session_mean_arrival - baseline.session_mean_arrival) /
                         static_cast<double>(baseline.sessions_with_packets);
    m.added_latency_s = std::max(0.0, shift);
  }
  return m;
}

struct SweepPoint {
  DefenseParams defense;
  std::optional<Padding> pad;  // as listed in the grid; empty keeps the base padding
  EfficiencyMetrics cost;
  double mi_bits = 0.0;     // empirical MI at the observer
  double mi_half_width = 0.0;
  double mi_lb_bits = 0.0;  // reported bound
  PairEstimate C;
  PairEstimate delta_bar;
  bool condition_v_ok = false;
  std::size_t violations = 0;
  bool feasible = false;
  bool pareto = false;

  double objective(SweepObjective o) const { return o == SweepObjective::kBound ? mi_lb_bits : mi_bits; }
};

struct SweepResult {
  std::vector<SweepPoint> points;
  std::optional<std::size_t> optimum;
  std::optional<std::size_t> nearest_infeasible;  // set when nothing is feasible
  double beta_max = 0.0;
  double dt_max = 0.0;
  SweepObjective objective = SweepObjective::kEmpiricalMi;
};

inline bool feasible(const EfficiencyMetrics& m, double beta_max, double dt_max) {
  return m.bandwidth_overhead <= beta_max + 1e-12 && m.added_latency_s <= dt_max + 1e-12;
}

// Feasibility, optimum and nearest infeasible point for the given budgets.
inline void select(SweepResult& s, double beta_max, double dt_max, SweepObjective objective) {
  s.beta_max = beta_max;
  s.dt_max = dt_max;
  s.objective = objective;
  s.optimum.reset();
  s.nearest_infeasible.reset();
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < s.points.size(); ++i) {
    auto& p = s.points[i];
    p.feasible = feasible(p.cost, beta_max, dt_max);
    if (p.feasible && p.objective(objective) < best) {
      best = p.objective(objective);
      s.optimum = i;
    }
  }
  if (s.optimum) return;
  // Euclidean excess over the budgets, overhead fraction and seconds alike.
  double nearest = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < s.points.size(); ++i) {
    const auto& c = s.points[i].cost;
    const double eo = std::max(0.0, c.bandwidth_overhead - beta_max);
    const double el = std::max(0.0, c.added_latency_s - dt_max);
    const double e = std::hypot(eo, el);
    if (e < nearest) {
      nearest = e;
      s.nearest_infeasible = i;
    }
  }
}

// Non-dominated points in (overhead, latency, empirical MI), all minimized.
inline void mark_pareto(SweepResult& s) {
  for (auto& p : s.points) {
    p.pareto = std::none_of(s.points.begin(), s.points.end(), [&](const SweepPoint& q) {
      const bool le = q.cost.bandwidth_overhead <= p.cost.bandwidth_overhead &&
                      q.cost.added_latency_s <= p.cost.added_latency_s && q.mi_bits <= p.mi_bits;
      const bool lt = q.cost.bandwidth_overhead < p.cost.bandwidth_overhead ||
                      q.cost.added_latency_s < p.cost.added_latency_s || q.mi_bits < p.mi_bits;
      return le && lt;
    });
  }
}

inline std::vector<std::pair<std::optional<Padding>, DefenseParams>> sweep_grid(const SweepConfig& sw) {
  std::vector<std::pair<std::optional<Padding>, DefenseParams>> grid;
  for (const auto& pad : sw.pads)
    for (double delay : sw.added_delay_s)
      for (double cover : sw.cover_rate_hz) grid.push_back({pad, DefenseParams{pad, delay, cover}});
  return grid;
}

// Runs every grid point on the same seeds as the undefended baseline.
inline SweepResult defense_sweep(const ScenarioConfig& base, unsigned threads = 1) {
  validate(base);
  detail::require(base.mode == ScenarioMode::kTraffic, "scenario.mode", "defense sweeps need traffic mode");
  ScenarioConfig undefended = base;
  undefended.chain.defense = DefenseParams{};
  const auto baseline = run_scenario(undefended, threads);

  SweepResult s;
  for (const auto& [pad, theta] : sweep_grid(base.sweep)) {
    ScenarioConfig c = base;
    c.chain.defense = theta;
    const auto r = theta.is_identity() ? baseline : run_scenario(c, threads);
    SweepPoint p;
    p.defense = theta;
    p.pad = pad;
    p.cost = efficiency(r.totals, baseline.totals);
    p.mi_bits = r.mi.point;
    p.mi_half_width = r.mi.half_width();
    p.mi_lb_bits = r.report.mi_lb_bits;
    p.C = r.C;
    p.delta_bar = r.delta_bar;
    p.condition_v_ok = r.report.condition_v_ok;
    p.violations = r.violations();
    s.points.push_back(p);
  }
  mark_pareto(s);
  select(s, base.sweep.beta_max, base.sweep.dt_max, base.sweep.objective);
  return s;
}

// ---------------------------------------------------------------------------
// Multiple sessions

struct MultiSessionRow {
  int sessions = 1;
  Estimate error;                 // Bayes error of the k-session classifier
  double rate = 0.0;              // -ln(error) / k
  double envelope = 1.0;          // exp(-k * Chernoff lower bound)
  std::optional<double> mi_bits;  // I(X; Y^k), oracle mode
  std::optional<double> mi_additive_bits;  // k * I(X; Y), oracle mode
};

struct MultiSessionResult {
  ScenarioMode mode = ScenarioMode::kTraffic;
  std::vector<MultiSessionRow> rows;
  double chernoff_lb_nats = 0.0;
  std::optional<double> chernoff_exact_nats;
  std::optional<double> single_session_accuracy;  // from run_scenario
  bool error_decreasing = true;    // strictly, oracle mode
  bool rate_nondecreasing = true;  // oracle mode
  bool accuracy_monotone = true;   // within intervals, simulation mode
};

namespace detail {

inline MultiSessionResult oracle_multisession(const ScenarioConfig& c) {
  const auto ch = c.oracle_channel();
  MultiSessionResult m;
  m.mode = ScenarioMode::kOracle;
  const auto single = run_scenario(c);
  m.chernoff_lb_nats = single.report.chernoff_lb_nats;
  m.chernoff_exact_nats = exact_chernoff(ch.row(0), ch.row(1)).nats;
  const double i1 = exact_mi(ch);
  for (int k = 1; k <= c.multisession.max_k; ++k) {
    const auto pk = product_channel(ch, static_cast<std::size_t>(k));
    const double pe = exact_bayes_error(pk);
    MultiSessionRow row;
    row.sessions = k;
    row.error = Estimate{pe, pe, pe, 0};
    row.rate = pe > 0.0 ? -std::log(pe) / k : std::numeric_limits<double>::infinity();
    row.envelope = std::exp(-k * m.chernoff_lb_nats);
    row.mi_bits = exact_mi(pk);
    row.mi_additive_bits = k * i1;
    m.rows.push_back(row);
  }
  for (std::size_t i = 1; i < m.rows.size(); ++i) {
    m.error_decreasing = m.error_decreasing && m.rows[i].error.point < m.rows[i - 1].error.point;
    // The first row is a single session; the asymptotic rate is judged from k = 2.
    if (i >= 2) m.rate_nondecreasing = m.rate_nondecreasing && m.rows[i].rate >= m.rows[i - 1].rate;
  }
  return m;
}

inline MultiSessionResult simulated_multisession(const ScenarioConfig& c, unsigned threads) {
  MultiSessionResult m;
  const auto single = run_scenario(c, threads);
  m.chernoff_lb_nats = single.report.chernoff_lb_nats;
  m.single_session_accuracy = single.accuracy.point;

  const ProfileSampler sampler{c.profiles, c.chain, c.window_s};
  const auto psi = c.psi();
  auto value = [&](const ChainTrace& tr) { return eval_observation_statistic(psi, tr.features); };
  const SemanticLabel labels[] = {c.label(c.pair.first), c.label(c.pair.second)};

  // Training split: the first sessions of each label, as in run_scenario.
  const auto n_test = static_cast<std::size_t>(std::ceil(c.holdout_fraction * static_cast<double>(c.trials)));
  const std::size_t n_train = c.trials - n_test;
  std::vector<std::vector<double>> train(2);
  std::vector<double> all;
  for (int x = 0; x < 2; ++x) {
    train[x] = collect(sampler, labels[x], n_train, c.seed, value, threads);
    all.insert(all.end(), train[x].begin(), train[x].end());
  }
  const auto grid = grid_spanning({all}, bins_for(c, 2 * c.trials));
  // Laplace-smoothed log-likelihood per bin.
  std::vector<std::vector<double>> loglik(2, std::vector<double>(grid.bins, 0.0));
  for (int x = 0; x < 2; ++x) {
    std::vector<double> counts(grid.bins, 0.0);
    for (double v : train[x]) counts[grid.index(v)] += 1.0;
    for (std::size_t b = 0; b < grid.bins; ++b)
      loglik[x][b] = std::log((counts[b] + 1.0) / (static_cast<double>(train[x].size()) + grid.bins));
  }

  const std::size_t t_count = c.multisession.trials;
  for (int k : c.multisession.sessions) {
    const auto master = derive_seed(c.seed, Stream::kHoldout, static_cast<std::uint64_t>(k));
    double acc = 0.0;
    double var = 0.0;
    for (int x = 0; x < 2; ++x) {
      const auto values = collect(sampler, labels[x], t_count * static_cast<std::size_t>(k), master, value, threads);
      double correct = 0.0;
      for (std::size_t j = 0; j < t_count; ++j) {
        double s0 = 0.0;
        double s1 = 0.0;
        for (int i = 0; i < k; ++i) {
          const auto b = grid.index(values[j * static_cast<std::size_t>(k) + static_cast<std::size_t>(i)]);
          s0 += loglik[0][b];
          s1 += loglik[1][b];
        }
        const double mine = x == 0 ? s0 : s1;
        const double other = x == 0 ? s1 : s0;
        correct += mine > other ? 1.0 : (mine == other ? 0.5 : 0.0);
      }
      const double ax = correct / static_cast<double>(t_count);
      acc += 0.5 * ax;
      var += 0.25 * ax * (1.0 - ax) / static_cast<double>(t_count);
    }
    const double hw = kZ99 * std::sqrt(var);
    MultiSessionRow row;
    row.sessions = k;
    const double err = 1.0 - acc;
    row.error = Estimate{err, std::max(0.0, err - hw), std::min(1.0, err + hw), 2 * t_count};
    row.rate = err > 0.0 ? -std::log(err) / k : std::numeric_limits<double>::infinity();
    row.envelope = std::exp(-k * m.chernoff_lb_nats);
    m.rows.push_back(row);
  }
  std::sort(m.rows.begin(), m.rows.end(), [](const auto& a, const auto& b) { return a.sessions < b.sessions; });
  for (std::size_t i = 1; i < m.rows.size(); ++i) {
    const auto& prev = m.rows[i - 1].error;
    const auto& cur = m.rows[i].error;
    m.accuracy_monotone = m.accuracy_monotone && cur.point <= prev.point + prev.half_width() + cur.half_width();
  }
  return m;
}

}  // namespace detail

inline MultiSessionResult multi_session_experiment(const ScenarioConfig& c, unsigned threads = 1) {
  validate(c);
  return c.mode == ScenarioMode::kOracle ? detail::oracle_multisession(c)
                                         : detail::simulated_multisession(c, threads);
}

}  // namespace sclab::harness
