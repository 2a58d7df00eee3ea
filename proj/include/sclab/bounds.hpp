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
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <fmt/format.h>

#include "sclab/errors.hpp"

namespace sclab {

inline constexpr double kLn2 = 0.69314718055994530942;

// Parameters of the propagation theorem for one label pair.
struct BoundInputs {
  double delta_bar = 0.0;  // protocol-layer gap of phi, in phi units
  double C = 0.0;          // max expected trajectory deviation d(z_P, z_N)
  double L_phi = 1.0;      // Lipschitz constant of phi w.r.t. d
  double rho = 1.0;        // share of the network-layer gap preserved by psi
  double M = 1.0;          // bound of phi
  double prior_x = 0.5;
  double prior_x2 = 0.5;
};

// rho = 0 is accepted: it describes an observer that keeps nothing, and every
// bound is then vacuous.
inline void validate(const BoundInputs& in) {
  detail::require(std::isfinite(in.M) && in.M > 0.0, "M", "must be finite and > 0");
  detail::require(std::isfinite(in.delta_bar) && in.delta_bar >= 0.0, "delta_bar",
                  "must be finite and >= 0");
  detail::require(in.delta_bar <= 2.0 * in.M, "delta_bar", "cannot exceed 2M for a statistic bounded by M");
  detail::require(std::isfinite(in.C) && in.C >= 0.0, "C", "must be finite and >= 0");
  detail::require(std::isfinite(in.L_phi) && in.L_phi > 0.0, "L_phi", "must be finite and > 0");
  detail::require(std::isfinite(in.rho) && in.rho >= 0.0 && in.rho <= 1.0, "rho", "must lie in [0, 1]");
  detail::require(in.prior_x > 0.0 && in.prior_x <= 1.0, "prior_x", "must lie in (0, 1]");
  detail::require(in.prior_x2 > 0.0 && in.prior_x2 <= 1.0, "prior_x2", "must lie in (0, 1]");
  detail::require(in.prior_x + in.prior_x2 <= 1.0 + 1e-12, "priors", "prior_x + prior_x2 must be <= 1");
}

// Surviving network-layer gap. Positive iff C < delta_bar / (2 L_phi).
inline double delta_N(double delta_bar, double L_phi, double C) {
  return delta_bar - 2.0 * L_phi * C;
}

// Expectation gap delta of a statistic bounded by M forces TV >= delta/(2M).
inline double tv_lower_bound_from_expectation(double delta, double M) {
  detail::require(std::isfinite(delta) && delta >= 0.0, "delta", "must be finite and >= 0");
  detail::require(std::isfinite(M) && M > 0.0, "M", "must be finite and > 0");
  return std::min(1.0, delta / (2.0 * M));
}

struct MiLowerBound {
  double general_bits = 0.0;
  double equal_prior_bits = 0.0;
  bool condition_ok = false;
};

inline MiLowerBound theorem_mi_lower_bound(const BoundInputs& in) {
  validate(in);
  const double dn = delta_N(in.delta_bar, in.L_phi, in.C);
  if (!(dn > 0.0)) return {};
  const double half = in.rho * dn / 2.0;
  return MiLowerBound{(2.0 / kLn2) * in.prior_x * in.prior_x2 * half * half,
                      (1.0 / (2.0 * kLn2)) * half * half, true};
}

// Binary equal-prior Bayes accuracy bound.
inline double accuracy_lower_bound(double rho, double delta_bar, double L_phi, double C) {
  return std::min(1.0, 0.5 + rho * std::max(0.0, delta_N(delta_bar, L_phi, C)) / 4.0);
}

inline double accuracy_from_tv(double tv) {
  detail::require(tv >= 0.0 && tv <= 1.0, "tv", "must lie in [0, 1]");
  return (1.0 + tv) / 2.0;
}

// H2(p) in bits.
inline double binary_entropy(double p) {
  detail::require_probability(p, "p");
  if (p == 0.0 || p == 1.0) return 0.0;
  return -p * std::log2(p) - (1.0 - p) * std::log2(1.0 - p);
}

// The p in [0, 1/2] with H2(p) = h, by bisection to 1e-9.
inline double inverse_binary_entropy(double h) {
  detail::require(h >= 0.0 && h <= 1.0, "h", "must lie in [0, 1]");
  if (h == 0.0) return 0.0;
  if (h == 1.0) return 0.5;
  double lo = 0.0;
  double hi = 0.5;
  while (hi - lo > 1e-9) {
    const double mid = 0.5 * (lo + hi);
    (binary_entropy(mid) < h ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

// Multi-class Fano: Pe >= (H(X) - I - 1) / log2(M - 1), floored at 0.
inline double fano_error_lower_bound(double entropy_bits, double mi_bits, int classes) {
  detail::require(classes >= 3, "classes", "general form needs M >= 3; use the binary form");
  detail::require(std::isfinite(mi_bits) && mi_bits >= 0.0, "mi_bits", "must be finite and >= 0");
  detail::require(std::isfinite(entropy_bits) && entropy_bits >= mi_bits, "entropy_bits",
                  "must be >= mi_bits");
  return std::max(0.0, (entropy_bits - mi_bits - 1.0) / std::log2(static_cast<double>(classes - 1)));
}

// Binary Fano: Pe >= H2^{-1}(1 - I).
inline double fano_binary_error_lower_bound(double mi_bits) {
  detail::require(mi_bits >= 0.0 && mi_bits <= 1.0, "mi_bits", "must lie in [0, 1]");
  return inverse_binary_entropy(1.0 - mi_bits);
}

// Chernoff information >= -1/2 ln(1 - TV^2), in nats; +inf at TV = 1.
inline double chernoff_lower_bound_from_tv(double tv) {
  detail::require(tv >= 0.0 && tv <= 1.0, "tv", "must lie in [0, 1]");
  if (tv >= 1.0) return std::numeric_limits<double>::infinity();
  return -0.5 * std::log1p(-tv * tv);
}

struct Bhattacharyya {
  double coefficient = 1.0;  // sum sqrt(p q)
  double distance_nats = 0.0;
};

inline Bhattacharyya bhattacharyya(std::span<const double> p, std::span<const double> q) {
  detail::require(p.size() == q.size() && !p.empty(), "support", "distributions need a common support");
  double bc = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) bc += std::sqrt(p[i] * q[i]);
  return Bhattacharyya{bc, -std::log(bc)};
}

// ---------------------------------------------------------------------------
// Reports

struct LeakageReport {
  BoundInputs inputs;
  double delta_N = 0.0;
  bool condition_v_ok = false;
  double tv_lb = 0.0;
  double mi_lb_bits = 0.0;
  double mi_lb_equal_prior_bits = 0.0;
  double acc_lb = 0.5;
  double chernoff_lb_nats = 0.0;
  std::optional<double> mi_empirical_bits;
  std::optional<double> fano_pe_lb;
  // Empirical MI below the general-prior bound.
  bool mi_consistency_violation = false;
};

inline LeakageReport build_report(const BoundInputs& in, std::optional<double> empirical_mi_bits = {}) {
  validate(in);
  LeakageReport r;
  r.inputs = in;
  r.delta_N = delta_N(in.delta_bar, in.L_phi, in.C);
  const auto mi = theorem_mi_lower_bound(in);
  r.condition_v_ok = mi.condition_ok;
  if (r.condition_v_ok) {
    r.tv_lb = tv_lower_bound_from_expectation(in.rho * r.delta_N, 1.0);
    r.mi_lb_bits = mi.general_bits;
    r.mi_lb_equal_prior_bits = mi.equal_prior_bits;
    r.acc_lb = accuracy_lower_bound(in.rho, in.delta_bar, in.L_phi, in.C);
    r.chernoff_lb_nats = chernoff_lower_bound_from_tv(r.tv_lb);
  }
  if (empirical_mi_bits) {
    detail::require(std::isfinite(*empirical_mi_bits) && *empirical_mi_bits >= 0.0, "empirical_mi",
                    "must be finite and >= 0");
    r.mi_empirical_bits = empirical_mi_bits;
    r.fano_pe_lb = fano_binary_error_lower_bound(std::min(1.0, *empirical_mi_bits));
    r.mi_consistency_violation = *empirical_mi_bits < r.mi_lb_bits;
  }
  return r;
}

struct MultiSessionProjection {
  int sessions = 1;
  double mi_accumulated_ub_bits = 0.0;  // n * mi_lb, an envelope rather than a bound
  double error_exponent_lb_nats = 0.0;
  double pe_envelope = 1.0;
  bool vacuous = true;
};

inline MultiSessionProjection multi_session_projection(const LeakageReport& r, int sessions) {
  detail::require(sessions >= 1, "sessions", "must be >= 1");
  MultiSessionProjection p;
  p.sessions = sessions;
  p.vacuous = !r.condition_v_ok;
  if (p.vacuous) return p;
  p.mi_accumulated_ub_bits = sessions * r.mi_lb_bits;
  p.error_exponent_lb_nats = r.chernoff_lb_nats;
  p.pe_envelope = std::exp(-sessions * r.chernoff_lb_nats);
  return p;
}

// Flat record: (field, unit, value) triples in a fixed order.
struct ReportField {
  std::string name;
  std::string unit;
  std::string value;
};

namespace detail {

inline std::string num(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return fmt::format("{:.10g}", v);
}

}  // namespace detail

inline std::vector<ReportField> report_fields(const LeakageReport& r) {
  using detail::num;
  const auto& in = r.inputs;
  std::vector<ReportField> f = {
      {"delta_bar", "phi", num(in.delta_bar)},
      {"C", "metric", num(in.C)},
      {"L_phi", "phi/metric", num(in.L_phi)},
      {"rho", "ratio", num(in.rho)},
      {"M", "phi", num(in.M)},
      {"prior_x", "probability", num(in.prior_x)},
      {"prior_x2", "probability", num(in.prior_x2)},
      {"delta_N", "phi", num(r.delta_N)},
      {"condition_v_ok", "flag", r.condition_v_ok ? "true" : "false"},
      {"tv_lb", "probability", num(r.tv_lb)},
      {"mi_lb_bits", "bits", num(r.mi_lb_bits)},
      {"mi_lb_equal_prior_bits", "bits", num(r.mi_lb_equal_prior_bits)},
      {"acc_lb", "probability", num(r.acc_lb)},
      {"chernoff_lb_nats", "nats", num(r.chernoff_lb_nats)},
      {"mi_empirical_bits", "bits", r.mi_empirical_bits ? num(*r.mi_empirical_bits) : ""},
      {"fano_pe_lb", "probability", r.fano_pe_lb ? num(*r.fano_pe_lb) : ""},
      {"mi_consistency_violation", "flag", r.mi_consistency_violation ? "true" : "false"},
  };
  return f;
}

inline std::string report_csv_header(const LeakageReport& r = {}) {
  std::string out;
  for (const auto& f : report_fields(r)) out += (out.empty() ? "" : ",") + f.name;
  return out;
}

inline std::string report_csv_row(const LeakageReport& r) {
  std::string out;
  bool first = true;
  for (const auto& f : report_fields(r)) {
    out += (first ? "" : ",") + f.value;
    first = false;
  }
  return out;
}

// `[leakage_report]` block with one `name = value  # unit` line per field.
inline std::string report_structured(const LeakageReport& r) {
  std::string out = "[leakage_report]\n";
  for (const auto& f : report_fields(r))
    out += fmt::format("{:<24} = {:<16} # {}\n", f.name, f.value.empty() ? "none" : f.value, f.unit);
  return out;
}

}  // namespace sclab
