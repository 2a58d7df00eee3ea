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
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "sclab/channel_ops.hpp"
#include "sclab/discrete_channel.hpp"
#include "sclab/errors.hpp"
#include "sclab/trajectory_space.hpp"
#include "sclab/traffic_model.hpp"

namespace sclab::harness {
namespace detail {
using sclab::detail::require;
using sclab::detail::require_finite;
using sclab::detail::require_non_negative;
using sclab::detail::require_probability;
}  // namespace detail

enum class ScenarioMode : std::uint8_t { kTraffic, kOracle };
enum class SweepObjective : std::uint8_t { kEmpiricalMi, kBound };

// Defense grid: the Cartesian product pads x added delays x cover rates.
// An empty pad entry keeps the scenario's own padding.
struct SweepConfig {
  std::vector<std::optional<Padding>> pads{std::nullopt};
  std::vector<double> added_delay_s{0.0};
  std::vector<double> cover_rate_hz{0.0};
  double beta_max = 0.1;  // bandwidth overhead budget, fraction
  double dt_max = 0.05;   // added latency budget, seconds
  SweepObjective objective = SweepObjective::kEmpiricalMi;
};

struct MultiSessionConfig {
  std::vector<int> sessions{1, 2, 3, 4, 6, 8};
  std::size_t trials = 2000;  // test trials per label and k (simulation)
  int max_k = 12;             // largest k (oracle)
};

struct OracleConfig {
  std::optional<std::string> channel_file;
  double crossover = 0.1;  // BSC used when no file is given
  double prior = 0.5;
  std::size_t samples = 100000;
  std::size_t instances = 1000;
  std::size_t statistics_per_channel = 10;
  std::size_t max_outputs = 6;
};

struct StatisticConfig {
  StatisticShape phi{};
  StatisticKind psi = StatisticKind::kClippedTotalBytes;
  double bound_m = 1.0;
  std::optional<double> lipschitz;  // replaces the analytic constant
};

struct ScenarioConfig {
  std::string name = "scenario";
  ScenarioMode mode = ScenarioMode::kTraffic;
  std::vector<SemanticLabel> labels;
  std::map<int, TrafficProfile> profiles;  // by label id
  std::pair<int, int> pair{0, 1};          // label ids the bound is built for
  ChainConfig chain;
  MetricConfig metric;
  StatisticConfig statistic;
  double window_s = 10.0;
  std::size_t trials = 10000;
  std::uint64_t seed = 1;
  std::size_t bins = 0;  // 0 picks the cube-root rule
  double holdout_fraction = 0.3;
  SweepConfig sweep;
  MultiSessionConfig multisession;
  OracleConfig oracle;
  std::optional<DiscreteChannel> channel;  // resolved oracle channel

  const SemanticLabel& label(int id) const {
    for (const auto& l : labels)
      if (l.id == id) return l;
    throw ValidationError("labels", "no label with id " + std::to_string(id));
  }

  StatisticDescriptor phi() const {
    auto d = make_statistic(statistic.phi, metric, statistic.bound_m);
    if (statistic.lipschitz) {
      d.lipschitz = *statistic.lipschitz;
      validate(d);
    }
    return d;
  }

  ObservationStatistic psi() const {
    StatisticShape s = statistic.phi;
    s.kind = statistic.psi;
    return ObservationStatistic{s};
  }

  DiscreteChannel oracle_channel() const {
    return channel ? *channel : binary_symmetric_channel(oracle.crossover, oracle.prior);
  }
};

inline void validate(const ScenarioConfig& c) {
  detail::require(c.labels.size() >= 2, "labels", "need at least 2 labels");
  validate_priors(c.labels);
  std::set<int> ids;
  for (const auto& l : c.labels) detail::require(ids.insert(l.id).second, "labels", "duplicate label id");
  detail::require(c.pair.first != c.pair.second, "pair", "labels of the pair must differ");
  c.label(c.pair.first);
  c.label(c.pair.second);
  detail::require(std::isfinite(c.window_s) && c.window_s > 0.0, "window_s", "must be > 0");
  detail::require(c.trials >= 100, "trials", "must be >= 100");
  detail::require(c.holdout_fraction > 0.0 && c.holdout_fraction < 1.0, "holdout_fraction",
                  "must lie in (0, 1)");
  detail::require(c.bins == 0 || c.bins >= 2, "bins", "must be 0 (automatic) or >= 2");
  if (c.mode == ScenarioMode::kTraffic) {
    for (const auto& l : c.labels) {
      detail::require(c.profiles.contains(l.id), "profiles", "no profile for label '" + l.name + "'");
      validate(c.profiles.at(l.id));
    }
    validate(c.chain);
    c.phi();
  } else {
    detail::require(c.oracle.samples >= 100, "oracle.samples", "must be >= 100");
    const auto ch = c.oracle_channel();
    detail::require(ch.inputs() == 2, "oracle", "oracle scenarios use 2-input channels");
  }
  detail::require_non_negative(c.sweep.beta_max, "sweep.beta_max");
  detail::require_non_negative(c.sweep.dt_max, "sweep.dt_max");
  for (double d : c.sweep.added_delay_s) detail::require_non_negative(d, "sweep.added_delay_s");
  for (double r : c.sweep.cover_rate_hz) detail::require_non_negative(r, "sweep.cover_rate_hz");
  detail::require(!c.sweep.pads.empty() && !c.sweep.added_delay_s.empty() && !c.sweep.cover_rate_hz.empty(),
                  "sweep", "grid must be non-empty");
  for (int k : c.multisession.sessions) detail::require(k >= 1, "multisession.sessions", "must be >= 1");
  detail::require(c.multisession.max_k >= 1, "multisession.max_k", "must be >= 1");
  detail::require(c.multisession.trials >= 10, "multisession.trials", "must be >= 10");
}

// Video versus web with the default chain.
inline ScenarioConfig default_scenario() {
  ScenarioConfig c;
  c.name = "video_vs_web";
  c.labels = {{0, "video", 0.5}, {1, "web", 0.5}};
  const auto presets = preset_profiles();
  c.profiles = {{0, presets.at("video")}, {1, presets.at("web")}};
  return c;
}

// ---------------------------------------------------------------------------
// Scenario files

namespace detail {

inline std::size_t edit_distance(std::string_view a, std::string_view b) {
  std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j)
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (a[i - 1] != b[j - 1])});
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

inline std::string nearest(std::string_view key, const std::vector<std::string>& valid) {
  std::string best;
  std::size_t best_d = static_cast<std::size_t>(-1);
  for (const auto& v : valid) {
    const auto d = edit_distance(key, v);
    if (d < best_d) {
      best_d = d;
      best = v;
    }
  }
  return best;
}

inline std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

inline std::vector<std::string> split_list(std::string_view s) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= s.size()) {
    const auto comma = s.find(',', start);
    const auto piece = trim(s.substr(start, comma == std::string_view::npos ? s.npos : comma - start));
    if (!piece.empty()) out.push_back(piece);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

using Tree = boost::property_tree::ptree;

// Typed reads from one section, with unknown-key rejection.
class Section {
 public:
  Section(std::string name, const Tree* tree) : name_(std::move(name)), tree_(tree) {}

  bool present() const noexcept { return tree_ != nullptr; }

  std::optional<std::string> raw(const std::string& key) {
    used_.push_back(key);
    if (!tree_) return std::nullopt;
    const auto it = tree_->find(key);
    if (it == tree_->not_found()) return std::nullopt;
    return trim(it->second.data());
  }

  void read(const std::string& key, double& out) {
    if (auto v = raw(key)) out = to_double(key, *v);
  }

  void read(const std::string& key, std::uint32_t& out) {
    if (auto v = raw(key)) {
      const double d = to_double(key, *v);
      require(d >= 0.0 && d <= 4294967295.0 && d == std::floor(d), field(key), "must be a non-negative integer");
      out = static_cast<std::uint32_t>(d);
    }
  }

  void read(const std::string& key, std::size_t& out) {
    if (auto v = raw(key)) {
      const double d = to_double(key, *v);
      require(d >= 0.0 && d == std::floor(d) && d < 9.007199254740992e15, field(key),
              "must be a non-negative integer");
      out = static_cast<std::size_t>(d);
    }
  }

  void read(const std::string& key, std::uint64_t& out, int) {
    if (auto v = raw(key)) {
      try {
        std::size_t used = 0;
        out = std::stoull(*v, &used, 0);
        require(used == v->size(), field(key), "bad integer '" + *v + "'");
      } catch (const std::logic_error&) {
        throw ValidationError(field(key), "bad integer '" + *v + "'");
      }
    }
  }

  void read(const std::string& key, int& out) {
    if (auto v = raw(key)) {
      const double d = to_double(key, *v);
      require(d == std::floor(d) && std::fabs(d) < 1e9, field(key), "must be an integer");
      out = static_cast<int>(d);
    }
  }

  void read(const std::string& key, bool& out) {
    if (auto v = raw(key)) {
      if (*v == "true" || *v == "1" || *v == "yes") out = true;
      else if (*v == "false" || *v == "0" || *v == "no") out = false;
      else throw ValidationError(field(key), "expected true or false, got '" + *v + "'");
    }
  }

  void read(const std::string& key, std::string& out) {
    if (auto v = raw(key)) out = *v;
  }

  void read_list(const std::string& key, std::vector<double>& out) {
    if (auto v = raw(key)) {
      out.clear();
      for (const auto& s : split_list(*v)) out.push_back(to_double(key, s));
    }
  }

  // Throws for any key never asked for.
  void finish() const {
    if (!tree_) return;
    for (const auto& [key, child] : *tree_) {
      if (std::find(used_.begin(), used_.end(), key) == used_.end())
        throw ValidationError(field(key), "unknown key '" + key + "' in [" + name_ +
                                              "]; nearest valid key is '" + nearest(key, used_) + "'");
    }
  }

  std::string field(const std::string& key) const { return name_ + "." + key; }

 private:
  double to_double(const std::string& key, const std::string& v) const {
    try {
      std::size_t used = 0;
      const double d = std::stod(v, &used);
      require(used == v.size() && std::isfinite(d), field(key), "bad number '" + v + "'");
      return d;
    } catch (const std::logic_error&) {
      throw ValidationError(field(key), "bad number '" + v + "'");
    }
  }

  std::string name_;
  const Tree* tree_;
  std::vector<std::string> used_;
};

inline Padding parse_padding(const std::string& field, const std::string& s) {
  const auto colon = s.find(':');
  const std::string policy = trim(s.substr(0, colon));
  std::uint32_t arg = 0;
  if (colon != std::string::npos) {
    try {
      arg = static_cast<std::uint32_t>(std::stoul(trim(s.substr(colon + 1))));
    } catch (const std::logic_error&) {
      throw ValidationError(field, "bad padding argument in '" + s + "'");
    }
  }
  Padding p;
  if (policy == "none") {
    p.policy = PadPolicy::kNone;
  } else if (policy == "block") {
    p.policy = PadPolicy::kPadToBlock;
    if (arg) p.block_bytes = arg;
  } else if (policy == "fixed") {
    p.policy = PadPolicy::kPadToFixed;
    if (arg) p.target_bytes = arg;
  } else if (policy == "random") {
    p.policy = PadPolicy::kRandomPad;
    p.max_extra_bytes = arg;
  } else {
    throw ValidationError(field, "unknown pad policy '" + policy + "'; expected none, block, fixed or random");
  }
  return p;
}

inline PadPolicy parse_pad_policy(const std::string& field, const std::string& s) {
  return parse_padding(field, s).policy;
}

inline void read_profile(Section& s, TrafficProfile& p) {
  std::string kind;
  s.read("kind", kind);
  if (!kind.empty()) p.kind = parse_class_kind(kind);
  s.read("burst_rate_hz", p.burst_rate_hz);
  s.read("up_fraction", p.up_fraction);
  s.read("duty_cycle", p.duty_cycle);
  s.read("cycle_s", p.cycle_s);
  std::string family;
  s.read("size_family", family);
  if (family == "lognormal") p.sizes = LognormalSize{std::log(1000.0), 0.5};
  else if (family == "pareto") p.sizes = TruncatedParetoSize{};
  else if (family == "fixed") p.sizes = FixedSize{};
  else if (!family.empty())
    throw ValidationError(s.field("size_family"), "expected lognormal, pareto or fixed, got '" + family + "'");
  auto family_key = [&](const char* key, auto* member_of) {
    if (s.raw(key) && !member_of)
      throw ValidationError(s.field(key), "does not apply to the profile's size family");
  };
  auto* ln = std::get_if<LognormalSize>(&p.sizes);
  auto* pa = std::get_if<TruncatedParetoSize>(&p.sizes);
  auto* fx = std::get_if<FixedSize>(&p.sizes);
  family_key("size_log_mean", ln);
  family_key("size_log_sd", ln);
  family_key("size_shape", pa);
  family_key("size_scale_bytes", pa);
  family_key("size_cap_bytes", pa);
  family_key("size_bytes", fx);
  if (ln) {
    s.read("size_log_mean", ln->log_mean);
    s.read("size_log_sd", ln->log_sd);
  }
  if (pa) {
    s.read("size_shape", pa->shape);
    s.read("size_scale_bytes", pa->scale_bytes);
    s.read("size_cap_bytes", pa->cap_bytes);
  }
  if (fx) s.read("size_bytes", fx->bytes);
}

}  // namespace detail

// Parses an INI scenario. Relative channel paths resolve against `base_dir`.
inline ScenarioConfig parse_scenario(std::istream& in, const std::filesystem::path& base_dir = {}) {
  using detail::Section;
  detail::Tree tree;
  try {
    boost::property_tree::ini_parser::read_ini(in, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw ValidationError("scenario", std::string("malformed scenario file: ") + e.message() +
                                          " at line " + std::to_string(e.line()));
  }
  static const std::vector<std::string> kSections = {
      "scenario", "protocol", "encryption", "network", "observation", "defense",
      "metric",   "statistic", "sweep",     "multisession", "oracle"};
  std::map<std::string, const detail::Tree*> sections;
  std::map<std::string, const detail::Tree*> profile_sections;
  for (const auto& [name, child] : tree) {
    if (child.empty() && !child.data().empty())
      throw ValidationError(name, "key '" + name + "' outside any section");
    if (name.rfind("profile.", 0) == 0) {
      profile_sections[name.substr(8)] = &child;
    } else if (std::find(kSections.begin(), kSections.end(), name) != kSections.end()) {
      sections[name] = &child;
    } else {
      auto all = kSections;
      all.push_back("profile.<label>");
      throw ValidationError(name, "unknown section [" + name + "]; nearest valid section is [" +
                                      detail::nearest(name, all) + "]");
    }
  }
  auto section = [&](const std::string& n) {
    const auto it = sections.find(n);
    return Section(n, it == sections.end() ? nullptr : it->second);
  };

  ScenarioConfig c;
  {
    auto s = section("scenario");
    s.read("name", c.name);
    std::string mode = "traffic";
    s.read("mode", mode);
    if (mode == "oracle") c.mode = ScenarioMode::kOracle;
    else if (mode != "traffic")
      throw ValidationError("scenario.mode", "expected traffic or oracle, got '" + mode + "'");
    std::string labels = "video, web";
    s.read("labels", labels);
    const auto names = detail::split_list(labels);
    std::vector<double> priors(names.size(), names.empty() ? 0.0 : 1.0 / static_cast<double>(names.size()));
    s.read_list("priors", priors);
    detail::require(priors.size() == names.size(), "scenario.priors", "need one prior per label");
    for (std::size_t i = 0; i < names.size(); ++i)
      c.labels.push_back({static_cast<int>(i), names[i], priors[i]});
    std::string pair;
    s.read("pair", pair);
    if (!pair.empty()) {
      const auto p = detail::split_list(pair);
      detail::require(p.size() == 2, "scenario.pair", "expected two label names");
      auto id = [&](const std::string& n) {
        for (const auto& l : c.labels)
          if (l.name == n) return l.id;
        throw ValidationError("scenario.pair", "unknown label '" + n + "'");
      };
      c.pair = {id(p[0]), id(p[1])};
    }
    s.read("window_s", c.window_s);
    s.read("trials", c.trials);
    s.read("seed", c.seed, 0);
    s.read("bins", c.bins);
    s.read("holdout_fraction", c.holdout_fraction);
    s.finish();
  }

  const auto presets = preset_profiles();
  for (const auto& l : c.labels) {
    const auto it = profile_sections.find(l.name);
    Section s("profile." + l.name, it == profile_sections.end() ? nullptr : it->second);
    std::string preset = presets.contains(l.name) ? l.name : "";
    s.read("preset", preset);
    TrafficProfile p;
    if (!preset.empty()) {
      detail::require(presets.contains(preset), s.field("preset"), "unknown preset '" + preset + "'");
      p = presets.at(preset);
    } else if (c.mode == ScenarioMode::kTraffic && !s.present()) {
      throw ValidationError("profile." + l.name, "label '" + l.name + "' needs a [profile." + l.name +
                                                     "] section or a preset name");
    }
    detail::read_profile(s, p);
    s.finish();
    c.profiles[l.id] = p;
  }
  for (const auto& [name, _] : profile_sections) {
    if (std::none_of(c.labels.begin(), c.labels.end(), [&](const auto& l) { return l.name == name; })) {
      std::vector<std::string> names;
      for (const auto& l : c.labels) names.push_back(l.name);
      throw ValidationError("profile." + name, "profile for unknown label '" + name +
                                                   "'; nearest label is '" + detail::nearest(name, names) + "'");
    }
  }

  {
    auto s = section("protocol");
    s.read("mtu_bytes", c.chain.protocol.mtu_bytes);
    s.read("header_bytes", c.chain.protocol.header_bytes);
    std::string seg;
    s.read("segmentation", seg);
    if (seg == "nagle") c.chain.protocol.segmentation = Segmentation::kNagle;
    else if (!seg.empty() && seg != "eager")
      throw ValidationError("protocol.segmentation", "expected eager or nagle, got '" + seg + "'");
    s.read("nagle_delay_s", c.chain.protocol.nagle_delay_s);
    s.read("pacing_jitter_s", c.chain.protocol.pacing_jitter_s);
    s.finish();
  }
  auto read_padding = [](Section& s, Padding& p) {
    std::string policy;
    s.read("pad_policy", policy);
    if (!policy.empty()) p.policy = detail::parse_pad_policy(s.field("pad_policy"), policy);
    s.read("block_bytes", p.block_bytes);
    s.read("target_bytes", p.target_bytes);
    s.read("max_extra_bytes", p.max_extra_bytes);
  };
  {
    auto s = section("encryption");
    s.read("record_overhead_bytes", c.chain.encryption.record_overhead_bytes);
    read_padding(s, c.chain.encryption.padding);
    s.read("processing_delay_s", c.chain.encryption.processing_delay_s);
    s.finish();
  }
  {
    auto s = section("network");
    auto& n = c.chain.network;
    s.read("base_latency_s", n.base_latency_s);
    s.read("jitter_s", n.jitter_s);
    s.read("loss_probability", n.loss_probability);
    s.read("retransmit_delay_s", n.retransmit_delay_s);
    s.read("reorder_probability", n.reorder_probability);
    s.finish();
  }
  {
    auto s = section("observation");
    auto& o = c.chain.observation;
    s.read("time_granule_s", o.time_granule_s);
    s.read("length_granule_bytes", o.length_granule_bytes);
    s.read("keep_probability", o.keep_probability);
    std::string features;
    s.read("features", features);
    if (!features.empty()) {
      o.features = FeatureSet{false, false, false, false};
      for (const auto& f : detail::split_list(features)) {
        if (f == "lengths") o.features.lengths = true;
        else if (f == "times") o.features.times = true;
        else if (f == "directions") o.features.directions = true;
        else if (f == "aggregates") o.features.aggregates = true;
        else
          throw ValidationError("observation.features",
                                "unknown feature '" + f + "'; nearest valid feature is '" +
                                    detail::nearest(f, {"lengths", "times", "directions", "aggregates"}) + "'");
      }
    }
    s.finish();
  }
  {
    auto s = section("defense");
    auto& d = c.chain.defense;
    std::string policy;
    s.read("pad_policy", policy);
    if (!policy.empty()) {
      Padding p;
      p.policy = detail::parse_pad_policy(s.field("pad_policy"), policy);
      d.pad_override = p;
    }
    if (d.pad_override) {
      s.read("block_bytes", d.pad_override->block_bytes);
      s.read("target_bytes", d.pad_override->target_bytes);
      s.read("max_extra_bytes", d.pad_override->max_extra_bytes);
    } else {
      for (const char* k : {"block_bytes", "target_bytes", "max_extra_bytes"})
        if (s.raw(k)) throw ValidationError(s.field(k), "needs pad_policy in [defense]");
    }
    s.read("added_delay_s", d.added_delay_s);
    s.read("cover_rate_hz", d.cover_rate_hz);
    s.finish();
  }
  {
    auto s = section("metric");
    auto& m = c.metric;
    s.read("w_len", m.w_len);
    s.read("w_cnt", m.w_cnt);
    s.read("w_time", m.w_time);
    s.read("w_dir", m.w_dir);
    s.read("s_cap_bytes", m.s_cap_bytes);
    s.read("max_packet_bytes", m.max_packet_bytes);
    s.read("cap_pairs", m.cap_pairs);
    s.finish();
  }
  {
    auto s = section("statistic");
    auto& st = c.statistic;
    std::string phi, psi;
    s.read("phi", phi);
    if (!phi.empty()) st.phi.kind = parse_statistic_kind(phi);
    st.psi = st.phi.kind;
    s.read("psi", psi);
    if (!psi.empty()) st.psi = parse_statistic_kind(psi);
    s.read("bound_m", st.bound_m);
    s.read("s_cap_bytes", st.phi.s_cap_bytes);
    s.read("g_cap_s", st.phi.g_cap_s);
    if (auto v = s.raw("lipschitz")) {
      double l = 0.0;
      try {
        l = std::stod(*v);
      } catch (const std::logic_error&) {
        throw ValidationError("statistic.lipschitz", "bad number '" + *v + "'");
      }
      st.lipschitz = l;
    }
    s.finish();
  }
  {
    auto s = section("sweep");
    auto& sw = c.sweep;
    if (auto v = s.raw("pads")) {
      sw.pads.clear();
      for (const auto& p : detail::split_list(*v)) {
        if (p == "base") sw.pads.push_back(std::nullopt);
        else sw.pads.push_back(detail::parse_padding("sweep.pads", p));
      }
    }
    s.read_list("added_delay_s", sw.added_delay_s);
    s.read_list("cover_rate_hz", sw.cover_rate_hz);
    s.read("beta_max", sw.beta_max);
    s.read("dt_max", sw.dt_max);
    std::string objective;
    s.read("objective", objective);
    if (objective == "bound") sw.objective = SweepObjective::kBound;
    else if (!objective.empty() && objective != "empirical_mi")
      throw ValidationError("sweep.objective", "expected empirical_mi or bound, got '" + objective + "'");
    s.finish();
  }
  {
    auto s = section("multisession");
    auto& ms = c.multisession;
    std::vector<double> k;
    s.read_list("sessions", k);
    if (!k.empty()) {
      ms.sessions.clear();
      for (double v : k) {
        detail::require(v >= 1 && v == std::floor(v), "multisession.sessions", "must be positive integers");
        ms.sessions.push_back(static_cast<int>(v));
      }
    }
    s.read("trials", ms.trials);
    s.read("max_k", ms.max_k);
    s.finish();
  }
  {
    auto s = section("oracle");
    auto& o = c.oracle;
    std::string file;
    s.read("channel_file", file);
    if (!file.empty()) {
      std::filesystem::path p(file);
      if (p.is_relative()) p = base_dir / p;
      std::ifstream f(p);
      detail::require(static_cast<bool>(f), "oracle.channel_file", "cannot open '" + p.string() + "'");
      o.channel_file = file;
      c.channel = parse_channel(f);
    }
    s.read("crossover", o.crossover);
    s.read("prior", o.prior);
    s.read("samples", o.samples);
    s.read("instances", o.instances);
    s.read("statistics_per_channel", o.statistics_per_channel);
    s.read("max_outputs", o.max_outputs);
    s.finish();
  }
  validate(c);
  return c;
}

inline ScenarioConfig load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  detail::require(static_cast<bool>(in), "scenario", "cannot open '" + path.string() + "'");
  return parse_scenario(in, path.parent_path());
}

inline ScenarioConfig parse_scenario_text(const std::string& text) {
  std::istringstream in(text);
  return parse_scenario(in);
}

}  // namespace sclab::harness
