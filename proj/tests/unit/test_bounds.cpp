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

#include <cmath>

#include <gtest/gtest.h>

#include "sclab/bounds.hpp"

namespace sclab {
namespace {

BoundInputs worked_example() {
  // rho = 0.8, delta_bar = 1, L_phi * C = 0.2 with L_phi = 1.
  return BoundInputs{1.0, 0.2, 1.0, 0.8, 1.0, 0.5, 0.5};
}

TEST(Bounds, DeltaN) {
  EXPECT_DOUBLE_EQ(delta_N(1.0, 1.0, 0.2), 0.6);
  EXPECT_DOUBLE_EQ(delta_N(1.0, 2.0, 0.25), 0.0);
  EXPECT_DOUBLE_EQ(delta_N(0.7, 3.0, 0.0), 0.7);
}

TEST(Bounds, TvFromExpectation) {
  EXPECT_DOUBLE_EQ(tv_lower_bound_from_expectation(1.6, 1.0), 0.8);
  EXPECT_DOUBLE_EQ(tv_lower_bound_from_expectation(0.0, 1.0), 0.0);
  EXPECT_NEAR(tv_lower_bound_from_expectation(0.48, 1.0), 0.24, 1e-15);
  EXPECT_DOUBLE_EQ(tv_lower_bound_from_expectation(5.0, 1.0), 1.0);
  EXPECT_THROW(tv_lower_bound_from_expectation(-0.1, 1.0), ValidationError);
  EXPECT_THROW(tv_lower_bound_from_expectation(0.1, 0.0), ValidationError);
}

TEST(Bounds, TheoremMiBound) {
  const auto eq = theorem_mi_lower_bound(worked_example());
  EXPECT_TRUE(eq.condition_ok);
  EXPECT_NEAR(eq.equal_prior_bits, 0.0576 / (2 * std::log(2.0)), 1e-15);
  EXPECT_NEAR(eq.equal_prior_bits, 0.0415496, 1e-7);
  EXPECT_NEAR(eq.general_bits, eq.equal_prior_bits, 1e-15);

  auto skew = worked_example();
  skew.prior_x = 0.3;
  skew.prior_x2 = 0.7;
  const auto g = theorem_mi_lower_bound(skew);
  EXPECT_NEAR(g.general_bits, 2 / std::log(2.0) * 0.21 * 0.0576, 1e-15);
  EXPECT_NEAR(g.general_bits, 0.0349017, 1e-7);

  auto dead = worked_example();
  dead.C = 0.5;
  const auto v = theorem_mi_lower_bound(dead);
  EXPECT_FALSE(v.condition_ok);
  EXPECT_EQ(v.general_bits, 0.0);
  EXPECT_EQ(v.equal_prior_bits, 0.0);
}

TEST(Bounds, InputsValidation) {
  auto in = worked_example();
  in.delta_bar = 2.5;
  EXPECT_THROW(validate(in), ValidationError);
  in = worked_example();
  in.prior_x = 0.0;
  EXPECT_THROW(validate(in), ValidationError);
  in = worked_example();
  in.prior_x = 0.6;
  EXPECT_THROW(validate(in), ValidationError);
  in = worked_example();
  in.rho = 1.5;
  EXPECT_THROW(validate(in), ValidationError);
  in = worked_example();
  in.L_phi = 0.0;
  EXPECT_THROW(validate(in), ValidationError);
  try {
    in = worked_example();
    in.C = -1;
    validate(in);
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_EQ(e.field(), "C");
  }
}

TEST(Bounds, Accuracy) {
  EXPECT_NEAR(accuracy_lower_bound(0.8, 1.0, 1.0, 0.2), 0.62, 1e-15);
  EXPECT_DOUBLE_EQ(accuracy_lower_bound(1.0, 2.0, 1.0, 0.0), 1.0);
  EXPECT_DOUBLE_EQ(accuracy_lower_bound(0.8, 1.0, 1.0, 0.6), 0.5);
  EXPECT_DOUBLE_EQ(accuracy_from_tv(0.8), 0.9);
  EXPECT_DOUBLE_EQ(accuracy_from_tv(0.0), 0.5);
  EXPECT_DOUBLE_EQ(accuracy_from_tv(1.0), 1.0);
}

TEST(Bounds, BinaryEntropyInverse) {
  EXPECT_NEAR(inverse_binary_entropy(binary_entropy(0.1)), 0.1, 1e-9);
  for (int i = 0; i <= 100; ++i) {
    const double I = i / 100.0;
    EXPECT_LE(std::fabs(binary_entropy(fano_binary_error_lower_bound(I)) - (1 - I)), 1e-8) << I;
  }
}

TEST(Bounds, FanoBinary) {
  // H2(0.316019) = 0.9 to six digits.
  EXPECT_NEAR(fano_binary_error_lower_bound(0.1), 0.31602, 1e-5);
  EXPECT_NEAR(fano_binary_error_lower_bound(0.0), 0.5, 1e-9);
  EXPECT_NEAR(fano_binary_error_lower_bound(1.0), 0.0, 1e-9);
  EXPECT_THROW(fano_binary_error_lower_bound(1.1), ValidationError);
  EXPECT_THROW(fano_binary_error_lower_bound(-0.1), ValidationError);
}

TEST(Bounds, FanoGeneral) {
  const double h = std::log2(100.0);
  EXPECT_NEAR(fano_error_lower_bound(h, 3.45, 100), (h - 4.45) / std::log2(99.0), 1e-15);
  EXPECT_NEAR(fano_error_lower_bound(h, 3.45, 100), 0.33093, 1e-5);
  EXPECT_EQ(fano_error_lower_bound(h, h - 0.5, 100), 0.0);
  EXPECT_NEAR(fano_error_lower_bound(std::log2(10.0), 0.0, 10), (std::log2(10.0) - 1) / std::log2(9.0),
              1e-15);
  EXPECT_THROW(fano_error_lower_bound(1.0, 0.5, 2), ValidationError);
}

TEST(Bounds, ChernoffFromTv) {
  EXPECT_NEAR(chernoff_lower_bound_from_tv(0.24), 0.0296627, 1e-7);
  EXPECT_EQ(chernoff_lower_bound_from_tv(0.0), 0.0);
  EXPECT_NEAR(chernoff_lower_bound_from_tv(0.8), -0.5 * std::log(0.36), 1e-15);
  EXPECT_TRUE(std::isinf(chernoff_lower_bound_from_tv(1.0)));
}

TEST(Bounds, BhattacharyyaValues) {
  const std::vector<double> p{0.1, 0.9};
  const std::vector<double> q{0.5, 0.5};
  const auto b = bhattacharyya(p, q);
  EXPECT_NEAR(b.coefficient, std::sqrt(0.05) + std::sqrt(0.45), 1e-15);
  EXPECT_NEAR(b.coefficient, 0.894427, 1e-6);
  EXPECT_NEAR(b.distance_nats, 0.111572, 1e-6);
  EXPECT_LE(0.4, std::sqrt(1 - std::exp(-2 * b.distance_nats)));
  EXPECT_NEAR(std::sqrt(1 - std::exp(-2 * b.distance_nats)), 0.4472, 1e-4);
  const auto same = bhattacharyya(p, p);
  EXPECT_NEAR(same.coefficient, 1.0, 1e-15);
  EXPECT_NEAR(same.distance_nats, 0.0, 1e-15);
}

TEST(Bounds, ReportOnWorkedExample) {
  const auto r = build_report(worked_example());
  EXPECT_TRUE(r.condition_v_ok);
  EXPECT_NEAR(r.delta_N, 0.6, 1e-15);
  EXPECT_NEAR(r.tv_lb, 0.24, 1e-15);
  EXPECT_NEAR(r.acc_lb, 0.62, 1e-12);
  EXPECT_NEAR(r.mi_lb_equal_prior_bits, 0.0415496, 1e-7);
  EXPECT_NEAR(r.chernoff_lb_nats, 0.0296627, 1e-7);
  EXPECT_FALSE(r.fano_pe_lb.has_value());
}

TEST(Bounds, ReportVacuity) {
  auto in = worked_example();
  in.delta_bar = 0.0;
  const auto r = build_report(in);
  EXPECT_FALSE(r.condition_v_ok);
  EXPECT_EQ(r.tv_lb, 0.0);
  EXPECT_EQ(r.mi_lb_bits, 0.0);
  EXPECT_EQ(r.mi_lb_equal_prior_bits, 0.0);
  EXPECT_EQ(r.acc_lb, 0.5);
  EXPECT_EQ(r.chernoff_lb_nats, 0.0);
}

TEST(Bounds, ReportWithEmpiricalMi) {
  const auto ok = build_report(worked_example(), 0.5);
  ASSERT_TRUE(ok.fano_pe_lb.has_value());
  EXPECT_NEAR(*ok.fano_pe_lb, fano_binary_error_lower_bound(0.5), 1e-15);
  EXPECT_FALSE(ok.mi_consistency_violation);
  const auto bad = build_report(worked_example(), 0.01);
  EXPECT_TRUE(bad.mi_consistency_violation);
}

TEST(Bounds, MultiSession) {
  const auto r = build_report(worked_example());
  const auto one = multi_session_projection(r, 1);
  EXPECT_FALSE(one.vacuous);
  EXPECT_DOUBLE_EQ(one.mi_accumulated_ub_bits, r.mi_lb_bits);
  EXPECT_DOUBLE_EQ(one.error_exponent_lb_nats, r.chernoff_lb_nats);
  const auto hundred = multi_session_projection(r, 100);
  EXPECT_NEAR(hundred.pe_envelope, std::exp(-100 * 0.0296627), 1e-6);
  EXPECT_NEAR(hundred.pe_envelope, 0.0515, 1e-4);
  double prev = 1.0;
  for (int n = 1; n <= 50; ++n) {
    const double pe = multi_session_projection(r, n).pe_envelope;
    EXPECT_LE(pe, prev);
    prev = pe;
  }
  auto in = worked_example();
  in.C = 1.0;
  EXPECT_TRUE(multi_session_projection(build_report(in), 5).vacuous);
  EXPECT_THROW(multi_session_projection(r, 0), ValidationError);
}

TEST(Bounds, Monotonicity) {
  const double grid[] = {0.0, 0.05, 0.1, 0.2, 0.3, 0.5};
  auto mi = [](BoundInputs in) { return build_report(in).mi_lb_bits; };
  auto acc = [](BoundInputs in) { return build_report(in).acc_lb; };
  for (int i = 0; i + 1 < 6; ++i) {
    auto a = worked_example();
    auto b = worked_example();
    a.C = grid[i];
    b.C = grid[i + 1];
    EXPECT_GE(mi(a), mi(b));
    EXPECT_GE(acc(a), acc(b));
    a = b = worked_example();
    a.rho = grid[i];
    b.rho = grid[i + 1];
    EXPECT_LE(mi(a), mi(b));
    EXPECT_LE(acc(a), acc(b));
    a = b = worked_example();
    a.delta_bar = 0.5 + grid[i];
    b.delta_bar = 0.5 + grid[i + 1];
    EXPECT_LE(mi(a), mi(b));
    EXPECT_LE(acc(a), acc(b));
    a = b = worked_example();
    a.L_phi = 0.5 + grid[i];
    b.L_phi = 0.5 + grid[i + 1];
    EXPECT_GE(mi(a), mi(b));
    EXPECT_GE(acc(a), acc(b));
  }
}

TEST(Bounds, Serialization) {
  const auto r = build_report(worked_example(), 0.3);
  const auto header = report_csv_header();
  const auto row = report_csv_row(r);
  EXPECT_EQ(std::count(header.begin(), header.end(), ','), std::count(row.begin(), row.end(), ','));
  EXPECT_NE(header.find("mi_lb_bits"), std::string::npos);
  EXPECT_NE(header.find("chernoff_lb_nats"), std::string::npos);
  const auto text = report_structured(r);
  EXPECT_NE(text.find("acc_lb"), std::string::npos);
  EXPECT_NE(text.find("0.62"), std::string::npos);
  EXPECT_NE(text.find("# bits"), std::string::npos);
}

}  // namespace
}  // namespace sclab
