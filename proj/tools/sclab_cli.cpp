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

// Command-line front end: runs scenarios and writes their results.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "sclab/sclab.hpp"

namespace {

namespace fs = std::filesystem;
using namespace sclab;
using namespace sclab::harness;

constexpr int kOk = 0;
constexpr int kInvalid = 1;
constexpr int kViolation = 2;

struct Common {
  std::string scenario;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> trials;
  std::string out_dir = ".";
  std::string format = "csv";
  unsigned threads = 1;
  std::optional<std::size_t> dump;  // trials per label for layers.csv
};

void add_common(CLI::App* app, Common& c, bool scenario_required) {
  auto* opt = app->add_option("scenario", c.scenario, "Scenario file (INI)");
  if (scenario_required) opt->required();
  app->add_option("--seed", c.seed, "Master seed (overrides the scenario)");
  app->add_option("--trials", c.trials, "Trials per label (overrides the scenario)");
  app->add_option("--out-dir", c.out_dir, "Directory for output files");
  app->add_option("--format", c.format, "Result format")->check(CLI::IsMember({"csv", "structured"}));
  app->add_option("--threads", c.threads, "Worker threads, 0 for all cores");
  app->add_option("--dump-layers", c.dump, "Write every packet of the first N trials per label to layers.csv")
      ->expected(0, 1);
}

// layers.csv for the scenario as loaded, when asked for.
void dump_layers(CLI::App* app, const Common& c, const ScenarioConfig& s, const fs::path& dir) {
  if (!app->count("--dump-layers")) return;
  write_file(dir / "layers.csv", layers_csv(s, c.dump.value_or(5)));
}

ScenarioConfig load(const Common& c) {
  ScenarioConfig s = c.scenario.empty() ? default_scenario() : load_scenario(c.scenario);
  if (c.seed) s.seed = *c.seed;
  if (c.trials) s.trials = *c.trials;
  validate(s);
  return s;
}

OutputFormat format_of(const Common& c) {
  return c.format == "structured" ? OutputFormat::kStructured : OutputFormat::kCsv;
}

fs::path out_dir(const Common& c) {
  fs::path dir(c.out_dir);
  fs::create_directories(dir);
  return dir;
}

unsigned threads_of(const Common& c) { return resolve_threads(c.threads); }

int cmd_run(CLI::App* app, const Common& c) {
  const auto s = load(c);
  const auto r = run_scenario(s, threads_of(c));
  const auto dir = out_dir(c);
  const auto f = format_of(c);
  write_file(dir / ("result" + extension(f)), format_rows({result_row(r)}, f, "result"));
  write_file(dir / "report.txt", report_text(r));
  write_file(dir / "estimates.csv", estimates_csv(r));
  dump_layers(app, c, s, dir);
  std::cout << report_text(r);
  return r.violations() == 0 ? kOk : kViolation;
}

int cmd_sweep(CLI::App* app, const Common& c) {
  const auto s = load(c);
  dump_layers(app, c, s, out_dir(c));
  const auto sw = defense_sweep(s, threads_of(c));
  const auto dir = out_dir(c);
  const auto f = format_of(c);
  write_file(dir / ("pareto" + extension(f)), format_rows(pareto_rows(sw), f, "point"));
  std::size_t violations = 0;
  for (const auto& p : sw.points) violations += p.violations;
  if (sw.optimum) {
    const auto& p = sw.points[*sw.optimum];
    fmt::print("optimum: point {} overhead {} latency {} s mi {} bits\n", *sw.optimum,
               sclab::detail::num(p.cost.bandwidth_overhead), sclab::detail::num(p.cost.added_latency_s),
               sclab::detail::num(p.mi_bits));
  } else if (sw.nearest_infeasible) {
    fmt::print("no feasible point; nearest infeasible: point {}\n", *sw.nearest_infeasible);
  }
  return violations == 0 ? kOk : kViolation;
}

int cmd_dpi(CLI::App* app, const Common& c) {
  const auto s = load(c);
  dump_layers(app, c, s, out_dir(c));
  const auto d = dpi_check(run_scenario(s, threads_of(c)));
  const auto f = format_of(c);
  write_file(out_dir(c) / ("dpi" + extension(f)), format_rows(dpi_rows(d), f, "layer"));
  for (const auto& l : d.layers) fmt::print("{:<12} {} bits\n", l.layer, sclab::detail::num(l.mi.point));
  fmt::print("dpi: {}\n", d.ok ? "ok" : "VIOLATION");
  return d.ok ? kOk : kViolation;
}

int cmd_multisession(CLI::App* app, const Common& c) {
  const auto s = load(c);
  dump_layers(app, c, s, out_dir(c));
  const auto m = multi_session_experiment(s, threads_of(c));
  const auto f = format_of(c);
  write_file(out_dir(c) / ("multisession" + extension(f)), format_rows(multisession_rows(m), f, "sessions"));
  for (const auto& r : m.rows)
    fmt::print("k={:<3} error {} rate {} nats\n", r.sessions, sclab::detail::num(r.error.point),
               sclab::detail::num(r.rate));
  return kOk;
}

int cmd_oracle(CLI::App* app, const Common& c) {
  const auto s = load(c);
  dump_layers(app, c, s, out_dir(c));
  const auto res = run_oracle_suite(s.oracle, s.seed);
  const auto f = format_of(c);
  write_file(out_dir(c) / ("oracle" + extension(f)), format_rows(oracle_rows(res), f, "check"));
  for (const auto& ch : res.checks)
    fmt::print("{:<36} {:>6} instances {:>3} violations\n", ch.name, ch.instances, ch.violations);
  return res.ok() ? kOk : kViolation;
}

int cmd_certify(CLI::App* app, const Common& c, std::size_t pairs) {
  const auto s = load(c);
  dump_layers(app, c, s, out_dir(c));
  const auto phi = s.phi();
  PerturbationSampler sampler;
  sampler.window_s = s.window_s;
  sampler.max_packet_bytes = s.metric.max_packet_bytes;
  const auto cert = lipschitz_certificate(phi, s.metric, sampler, pairs, s.seed);
  const Row row = {{"statistic", std::string(to_string(phi.shape.kind))},
                   {"declared", sclab::detail::num(cert.declared)},
                   {"max_ratio", sclab::detail::num(cert.max_ratio)},
                   {"pairs_used", std::to_string(cert.pairs_used)},
                   {"passes", cert.passes ? "true" : "false"}};
  const auto f = format_of(c);
  write_file(out_dir(c) / ("certify" + extension(f)), format_rows({row}, f, "certificate"));
  fmt::print("{}: declared L = {}, largest observed ratio = {} over {} pairs: {}\n", row[0].second,
             row[1].second, row[2].second, row[3].second, cert.passes ? "pass" : "FAIL");
  return cert.passes ? kOk : kViolation;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Side-channel leakage lab: bounds and estimates for encrypted traffic"};
  app.require_subcommand(1);
  Common common;
  std::size_t pairs = 100000;

  auto* run = app.add_subcommand("run", "Estimate parameters, build the leakage report, check soundness");
  add_common(run, common, false);
  auto* sweep = app.add_subcommand("sweep", "Evaluate the defense grid under bandwidth and latency budgets");
  add_common(sweep, common, false);
  auto* dpi = app.add_subcommand("dpi", "Plug-in MI at every layer of the chain");
  add_common(dpi, common, false);
  auto* ms = app.add_subcommand("multisession", "Error against the number of observed sessions");
  add_common(ms, common, false);
  auto* oracle = app.add_subcommand("oracle", "Check every inequality on random discrete channels");
  add_common(oracle, common, false);
  auto* certify = app.add_subcommand("certify", "Empirical Lipschitz certificate of the scenario statistic");
  add_common(certify, common, false);
  certify->add_option("--pairs", pairs, "Trajectory pairs to sample");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInvalid;
  }
  try {
    if (run->parsed()) return cmd_run(run, common);
    if (sweep->parsed()) return cmd_sweep(sweep, common);
    if (dpi->parsed()) return cmd_dpi(dpi, common);
    if (ms->parsed()) return cmd_multisession(ms, common);
    if (oracle->parsed()) return cmd_oracle(oracle, common);
    if (certify->parsed()) return cmd_certify(certify, common, pairs);
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInvalid;
  } catch (const CapacityError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInvalid;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInvalid;
  }
  return kInvalid;
}
