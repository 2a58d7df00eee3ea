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

#include <filesystem>
#include <fstream>
#include <string>
#include <utility>
#include <vector>

#include <fmt/format.h>

#include "sclab/bounds.hpp"
#include "sclab/harness/experiment.hpp"
#include "sclab/harness/oracle_suite.hpp"
#include "sclab/harness/scenario.hpp"

namespace sclab::harness {

enum class OutputFormat : std::uint8_t { kCsv, kStructured };

inline constexpr std::string_view kVersion = "1.0.0";

using Row = std::vector<std::pair<std::string, std::string>>;

namespace detail {

using sclab::detail::num;

inline std::string flag(bool b) { return b ? "true" : "false"; }

inline std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

inline std::string pad_name(const std::optional<Padding>& p) {
  if (!p) return "base";
  switch (p->policy) {
    case PadPolicy::kNone: return "none";
    case PadPolicy::kPadToBlock: return fmt::format("block:{}", p->block_bytes);
    case PadPolicy::kPadToFixed: return fmt::format("fixed:{}", p->target_bytes);
    case PadPolicy::kRandomPad: return fmt::format("random:{}", p->max_extra_bytes);
  }
  return "none";
}

inline void add_estimate(Row& row, const std::string& name, double point, double lo, double hi) {
  row.emplace_back(name, num(point));
  row.emplace_back(name + "_lo", num(lo));
  row.emplace_back(name + "_hi", num(hi));
}

}  // namespace detail

// Flat (name, value) record of one experiment. No wall-clock values, so two
// runs with the same seed produce identical bytes.
inline Row result_row(const ExperimentResult& r) {
  using detail::num;
  Row row = {{"scenario", r.scenario},
             {"mode", r.mode == ScenarioMode::kOracle ? "oracle" : "traffic"},
             {"version", std::string(kVersion)},
             {"seed", std::to_string(r.seed)},
             {"trials", std::to_string(r.trials)},
             {"bins", std::to_string(r.bins)},
             {"window_s", num(r.window_s)}};
  detail::add_estimate(row, "delta_bar", r.delta_bar.point, r.delta_bar.lo, r.delta_bar.hi);
  detail::add_estimate(row, "C", r.C.point, r.C.lo, r.C.hi);
  detail::add_estimate(row, "rho", r.rho.point, r.rho.lo, r.rho.hi);
  row.emplace_back("rho_status", std::string(to_string(r.rho.status)));
  // The report's own delta_bar, C and rho are the conservative ends above.
  for (const auto& f : report_fields(r.report)) {
    if (f.name == "mi_empirical_bits") continue;
    const bool taken = f.name == "delta_bar" || f.name == "C" || f.name == "rho";
    row.emplace_back(taken ? "report_" + f.name : f.name, f.value);
  }
  detail::add_estimate(row, "mi_empirical_bits", r.mi.point, r.mi.lo, r.mi.hi);
  detail::add_estimate(row, "tv_empirical", r.tv.point, r.tv.lo, r.tv.hi);
  detail::add_estimate(row, "accuracy_empirical", r.accuracy.point, r.accuracy.lo, r.accuracy.hi);
  for (const auto& l : r.layers) row.emplace_back("mi_" + l.layer + "_bits", num(l.mi.point));
  row.emplace_back("dpi_ok", detail::flag(r.dpi_ok));
  if (r.truth) {
    row.emplace_back("tv_exact", num(r.truth->tv));
    row.emplace_back("mi_exact_bits", num(r.truth->mi_bits));
    row.emplace_back("accuracy_exact", num(r.truth->bayes_accuracy));
    row.emplace_back("chernoff_exact_nats", num(r.truth->chernoff_nats));
  }
  row.emplace_back("soundness_violations", std::to_string(r.violations()));
  return row;
}

inline std::string format_rows(const std::vector<Row>& rows, OutputFormat fmt, const std::string& block) {
  std::string out;
  if (rows.empty()) return out;
  if (fmt == OutputFormat::kCsv) {
    for (std::size_t i = 0; i < rows.front().size(); ++i)
      out += (i ? "," : "") + detail::csv_escape(rows.front()[i].first);
    out += '\n';
    for (const auto& row : rows) {
      for (std::size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + detail::csv_escape(row[i].second);
      out += '\n';
    }
    return out;
  }
  for (std::size_t r = 0; r < rows.size(); ++r) {
    out += rows.size() == 1 ? fmt::format("[{}]\n", block) : fmt::format("[{}.{}]\n", block, r);
    for (const auto& [k, v] : rows[r]) out += fmt::format("{} = {}\n", k, v.empty() ? "none" : v);
    if (r + 1 < rows.size()) out += '\n';
  }
  return out;
}

inline std::string estimates_csv(const ExperimentResult& r) {
  using detail::num;
  std::string out = "parameter,point,lo,hi,n,seed_master,seed_first,seed_count,status\n";
  auto pair = [&](const char* name, const PairEstimate& e) {
    out += fmt::format("{},{},{},{},{},{},{},{},{}\n", name, num(e.point), num(e.lo), num(e.hi), e.n,
                       e.seeds.master, e.seeds.first, e.seeds.count, to_string(e.status));
  };
  auto plain = [&](const std::string& name, double point, double lo, double hi, std::size_t n) {
    out += fmt::format("{},{},{},{},{},{},0,{},ok\n", name, num(point), num(lo), num(hi), n, r.seed, r.trials);
  };
  pair("delta_bar", r.delta_bar);
  pair("C", r.C);
  pair("rho", r.rho);
  plain("mi_bits", r.mi.point, r.mi.lo, r.mi.hi, r.mi.n);
  plain("tv", r.tv.point, r.tv.lo, r.tv.hi, r.tv.n);
  plain("accuracy", r.accuracy.point, r.accuracy.lo, r.accuracy.hi, r.accuracy.n);
  for (const auto& l : r.layers) plain("mi_" + l.layer + "_bits", l.mi.point, l.mi.lo, l.mi.hi, l.mi.n);
  return out;
}

inline std::string soundness_text(const ExperimentResult& r) {
  std::string out = "[soundness]\n";
  for (const auto& c : r.checks)
    out += fmt::format("{:<24} = {} # bound {} vs empirical lower end {}\n", c.name, c.ok ? "ok" : "VIOLATION",
                       detail::num(c.bound), detail::num(c.empirical_lo));
  out += fmt::format("{:<24} = {}\n", "dpi", r.dpi_ok ? "ok" : "VIOLATION");
  return out;
}

inline std::string report_text(const ExperimentResult& r) {
  return report_structured(r.report) + "\n" + soundness_text(r);
}

// First `per_label` trials of each pair label, every packet at each layer.
// Trial ids number the first label's trials from 0 and the second's after.
inline std::string layers_csv(const ScenarioConfig& c, std::size_t per_label) {
  std::string out = "trial,layer,index,time_s,length_bytes,direction\n";
  if (c.mode != ScenarioMode::kTraffic) return out;
  const ProfileSampler sampler{c.profiles, c.chain, c.window_s};
  const int ids[] = {c.pair.first, c.pair.second};
  for (std::size_t li = 0; li < 2; ++li) {
    const auto& label = c.label(ids[li]);
    for (std::size_t t = 0; t < per_label; ++t) {
      const auto tr = sampler(label, trial_seed(c.seed, label.id, t));
      const std::size_t trial = li * per_label + t;
      for (const auto* seq : {&tr.plaintext, &tr.ciphertext, &tr.arrival}) {
        for (std::size_t i = 0; i < seq->packets.size(); ++i) {
          const auto& p = seq->packets[i];
          out += fmt::format("{},{},{},{},{},{}\n", trial, to_string(seq->layer), i, detail::num(p.time_s),
                             p.length_bytes, to_string(p.direction));
        }
      }
    }
  }
  return out;
}

inline std::vector<Row> pareto_rows(const SweepResult& s) {
  using detail::num;
  std::vector<Row> rows;
  for (std::size_t i = 0; i < s.points.size(); ++i) {
    const auto& p = s.points[i];
    rows.push_back({{"point", std::to_string(i)},
                    {"pad", detail::pad_name(p.pad)},
                    {"added_delay_s", num(p.defense.added_delay_s)},
                    {"cover_rate_hz", num(p.defense.cover_rate_hz)},
                    {"bandwidth_overhead", num(p.cost.bandwidth_overhead)},
                    {"added_latency_s", num(p.cost.added_latency_s)},
                    {"throughput_ratio", num(p.cost.throughput_ratio)},
                    {"mi_empirical_bits", num(p.mi_bits)},
                    {"mi_lb_bits", num(p.mi_lb_bits)},
                    {"delta_bar_lo", num(p.delta_bar.lo)},
                    {"C_hi", num(p.C.hi)},
                    {"condition_v_ok", detail::flag(p.condition_v_ok)},
                    {"feasible", detail::flag(p.feasible)},
                    {"pareto", detail::flag(p.pareto)},
                    {"optimal", detail::flag(s.optimum == i)},
                    {"nearest_infeasible", detail::flag(s.nearest_infeasible == i)},
                    {"soundness_violations", std::to_string(p.violations)}});
  }
  return rows;
}

inline std::vector<Row> multisession_rows(const MultiSessionResult& m) {
  using detail::num;
  std::vector<Row> rows;
  for (const auto& r : m.rows) {
    Row row = {{"sessions", std::to_string(r.sessions)},
               {"error", num(r.error.point)},
               {"error_lo", num(r.error.lo)},
               {"error_hi", num(r.error.hi)},
               {"rate_nats", num(r.rate)},
               {"envelope", num(r.envelope)},
               {"mi_bits", r.mi_bits ? num(*r.mi_bits) : ""},
               {"mi_additive_bits", r.mi_additive_bits ? num(*r.mi_additive_bits) : ""}};
    rows.push_back(std::move(row));
  }
  return rows;
}

inline std::vector<Row> oracle_rows(const OracleSuiteResult& s) {
  std::vector<Row> rows;
  for (const auto& c : s.checks)
    rows.push_back({{"check", c.name},
                    {"instances", std::to_string(c.instances)},
                    {"violations", std::to_string(c.violations)},
                    {"worst_excess", detail::num(c.worst)}});
  return rows;
}

inline std::vector<Row> dpi_rows(const DpiCheck& d) {
  std::vector<Row> rows;
  for (const auto& l : d.layers)
    rows.push_back({{"layer", l.layer},
                    {"mi_bits", detail::num(l.mi.point)},
                    {"mi_lo", detail::num(l.mi.lo)},
                    {"mi_hi", detail::num(l.mi.hi)},
                    {"bias_bits", detail::num(l.mi.bias)}});
  return rows;
}

inline void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  sclab::detail::require(static_cast<bool>(out), "out_dir", "cannot write '" + path.string() + "'");
  out << text;
}

inline std::string extension(OutputFormat f) { return f == OutputFormat::kCsv ? ".csv" : ".txt"; }

}  // namespace sclab::harness
