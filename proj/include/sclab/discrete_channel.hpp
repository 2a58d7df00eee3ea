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
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "sclab/errors.hpp"
#include "sclab/random.hpp"

namespace sclab {
namespace detail {

// Neumaier summation; long probability vectors stay within 1e-12 of 1.
inline double compensated_sum(std::span<const double> v) noexcept {
  double sum = 0.0;
  double c = 0.0;
  for (double x : v) {
    const double t = sum + x;
    c += std::fabs(sum) >= std::fabs(x) ? (sum - t) + x : (x - t) + sum;
    sum = t;
  }
  return sum + c;
}

}  // namespace detail

// Finite-alphabet kernel P(y | x) with an input prior; the exact oracle for
// every information quantity in the library.
class DiscreteChannel {
 public:
  DiscreteChannel(std::vector<double> priors, std::vector<std::vector<double>> rows)
      : priors_(std::move(priors)) {
    detail::require(priors_.size() >= 2, "inputs", "need at least 2 inputs");
    detail::require(rows.size() == priors_.size(), "rows", "one row per input required");
    outputs_ = rows.front().size();
    detail::require(outputs_ >= 2, "outputs", "need at least 2 outputs");
    check_distribution(priors_, "priors");
    matrix_.reserve(priors_.size() * outputs_);
    for (std::size_t x = 0; x < rows.size(); ++x) {
      detail::require(rows[x].size() == outputs_, "rows", "ragged conditional matrix");
      check_distribution(rows[x], "row " + std::to_string(x));
      matrix_.insert(matrix_.end(), rows[x].begin(), rows[x].end());
    }
  }

  std::size_t inputs() const noexcept { return priors_.size(); }
  std::size_t outputs() const noexcept { return outputs_; }
  std::span<const double> priors() const noexcept { return priors_; }
  std::span<const double> row(std::size_t x) const {
    detail::require(x < inputs(), "x", "input index out of range");
    return {matrix_.data() + x * outputs_, outputs_};
  }
  double at(std::size_t x, std::size_t y) const noexcept { return matrix_[x * outputs_ + y]; }

  // Output marginal P(y).
  std::vector<double> output_marginal() const {
    std::vector<double> py(outputs_, 0.0);
    for (std::size_t x = 0; x < inputs(); ++x)
      for (std::size_t y = 0; y < outputs_; ++y) py[y] += priors_[x] * at(x, y);
    return py;
  }

  // Draws (x, y) from the joint law.
  std::pair<std::size_t, std::size_t> sample(CounterRng& rng) const {
    const std::size_t x = draw(priors_, rng);
    return {x, draw(row(x), rng)};
  }

  // Same channel with a different input prior.
  DiscreteChannel with_priors(std::vector<double> priors) const {
    std::vector<std::vector<double>> rows;
    for (std::size_t x = 0; x < inputs(); ++x) rows.emplace_back(row(x).begin(), row(x).end());
    return DiscreteChannel(std::move(priors), std::move(rows));
  }

  static void check_distribution(std::span<const double> p, const std::string& what) {
    for (double v : p) detail::require(std::isfinite(v) && v >= 0.0, what, "entries must be >= 0");
    detail::require(std::fabs(detail::compensated_sum(p) - 1.0) <= 1e-12, what,
                    "must sum to 1 within 1e-12");
  }

 private:
  static std::size_t draw(std::span<const double> p, CounterRng& rng) {
    const double u = rng.uniform();
    double acc = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
      acc += p[i];
      if (u < acc) return i;
    }
    // Rounding slack: last index with positive mass.
    for (std::size_t i = p.size(); i-- > 0;)
      if (p[i] > 0.0) return i;
    return p.size() - 1;
  }

  std::vector<double> priors_;
  std::size_t outputs_ = 0;
  std::vector<double> matrix_;
};

inline DiscreteChannel binary_symmetric_channel(double crossover, double prior0 = 0.5) {
  return DiscreteChannel({prior0, 1.0 - prior0},
                         {{1.0 - crossover, crossover}, {crossover, 1.0 - crossover}});
}

// Random channel with Dirichlet(1)-like rows; `sparsity` zeroes entries.
inline DiscreteChannel random_channel(CounterRng& rng, std::size_t inputs, std::size_t outputs,
                                      double sparsity = 0.0) {
  auto simplex = [&](std::size_t k, double zero_prob) {
    std::vector<double> v(k);
    double s = 0.0;
    for (auto& e : v) {
      e = (zero_prob > 0.0 && rng.bernoulli(zero_prob)) ? 0.0 : -std::log(rng.uniform_open());
      s += e;
    }
    if (s == 0.0) {
      v[rng.below(k)] = 1.0;
      s = 1.0;
    }
    for (auto& e : v) e /= s;
    // Push the rounding residue into the largest entry.
    const double residue = 1.0 - std::accumulate(v.begin(), v.end(), 0.0);
    *std::max_element(v.begin(), v.end()) += residue;
    return v;
  };
  std::vector<double> priors = simplex(inputs, 0.0);
  std::vector<std::vector<double>> rows;
  for (std::size_t x = 0; x < inputs; ++x) rows.push_back(simplex(outputs, sparsity));
  return DiscreteChannel(std::move(priors), std::move(rows));
}

// ---------------------------------------------------------------------------
// Exact quantities

inline double total_variation(std::span<const double> p, std::span<const double> q) {
  detail::require(p.size() == q.size(), "support", "distributions must share a support");
  double s = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) s += std::fabs(p[i] - q[i]);
  // Rows summing to 1 within rounding can push the raw sum past 2.
  return std::min(1.0, 0.5 * s);
}

inline double exact_tv(const DiscreteChannel& ch, std::size_t x, std::size_t x2) {
  detail::require(x < ch.inputs() && x2 < ch.inputs(), "x", "input index out of range");
  detail::require(x != x2, "x", "indices must differ");
  return total_variation(ch.row(x), ch.row(x2));
}

// I(X;Y) in bits, with 0 log 0 = 0.
inline double exact_mi(const DiscreteChannel& ch) {
  const auto py = ch.output_marginal();
  double mi = 0.0;
  for (std::size_t x = 0; x < ch.inputs(); ++x) {
    const double px = ch.priors()[x];
    if (px == 0.0) continue;
    for (std::size_t y = 0; y < ch.outputs(); ++y) {
      const double p = ch.at(x, y);
      if (p > 0.0) mi += px * p * std::log2(p / py[y]);
    }
  }
  return std::max(mi, 0.0);
}

// Minimum error probability of any decision rule: 1 - sum_y max_x p(x)P(y|x).
inline double exact_bayes_error(const DiscreteChannel& ch) {
  double hit = 0.0;
  for (std::size_t y = 0; y < ch.outputs(); ++y) {
    double best = 0.0;
    for (std::size_t x = 0; x < ch.inputs(); ++x) best = std::max(best, ch.priors()[x] * ch.at(x, y));
    hit += best;
  }
  return std::clamp(1.0 - hit, 0.0, 1.0);
}

struct ChernoffResult {
  double nats = 0.0;  // +inf when the supports do not overlap
  double lambda = 0.5;
  bool zero_overlap = false;
};

// Sum_y p^lambda q^(1-lambda), taking the one-sided limits at lambda = 0, 1.
inline double chernoff_objective(std::span<const double> p, std::span<const double> q, double lambda) {
  double s = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (lambda <= 0.0) {
      if (p[i] > 0.0) s += q[i];
    } else if (lambda >= 1.0) {
      if (q[i] > 0.0) s += p[i];
    } else if (p[i] > 0.0 && q[i] > 0.0) {
      s += std::exp(lambda * std::log(p[i]) + (1.0 - lambda) * std::log(q[i]));
    }
  }
  return s;
}

// Chernoff information -ln min_lambda sum p^lambda q^(1-lambda): a 101-point
// grid scan brackets the minimum of the convex objective, golden-section
// search refines it to `tolerance` in lambda.
inline ChernoffResult exact_chernoff(std::span<const double> p, std::span<const double> q,
                                     double tolerance = 1e-10) {
  detail::require(p.size() == q.size(), "support", "distributions must share a support");
  detail::require(tolerance > 0.0, "tolerance", "must be > 0");
  ChernoffResult r;
  double overlap = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) overlap += (p[i] > 0.0 && q[i] > 0.0) ? 1.0 : 0.0;
  if (overlap == 0.0) {
    r.nats = std::numeric_limits<double>::infinity();
    r.zero_overlap = true;
    return r;
  }
  constexpr int kGrid = 100;
  int best = 0;
  double best_val = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= kGrid; ++i) {
    const double v = chernoff_objective(p, q, static_cast<double>(i) / kGrid);
    if (v < best_val) {
      best_val = v;
      best = i;
    }
  }
  double a = std::max(0, best - 1) / static_cast<double>(kGrid);
  double b = std::min(kGrid, best + 1) / static_cast<double>(kGrid);
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = chernoff_objective(p, q, c);
  double fd = chernoff_objective(p, q, d);
  while (b - a > tolerance) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = chernoff_objective(p, q, c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = chernoff_objective(p, q, d);
    }
  }
  const double lam = 0.5 * (a + b);
  const double refined = chernoff_objective(p, q, lam);
  r.lambda = refined <= best_val ? lam : static_cast<double>(best) / kGrid;
  r.nats = std::max(0.0, -std::log(std::min(refined, best_val)));
  return r;
}

inline constexpr std::size_t kDefaultEnumerationCap = std::size_t{1} << 20;

// n conditionally i.i.d. uses of `ch`: outputs are n-tuples (first coordinate
// most significant), conditionals are coordinate products.
inline DiscreteChannel product_channel(const DiscreteChannel& ch, std::size_t n,
                                       std::size_t cap = kDefaultEnumerationCap) {
  detail::require(n >= 1, "n", "must be >= 1");
  std::size_t size = 1;
  for (std::size_t i = 0; i < n; ++i) {
    if (size > cap / ch.outputs())
      throw CapacityError("product channel output alphabet exceeds the enumeration cap of " +
                          std::to_string(cap));
    size *= ch.outputs();
  }
  std::vector<std::vector<double>> rows(ch.inputs());
  for (std::size_t x = 0; x < ch.inputs(); ++x) {
    std::vector<double> cur(ch.row(x).begin(), ch.row(x).end());
    for (std::size_t k = 1; k < n; ++k) {
      std::vector<double> next;
      next.reserve(cur.size() * ch.outputs());
      for (double a : cur)
        for (std::size_t y = 0; y < ch.outputs(); ++y) next.push_back(a * ch.at(x, y));
      cur = std::move(next);
    }
    // Renormalize against accumulated rounding before validation.
    const double s = detail::compensated_sum(cur);
    for (auto& v : cur) v /= s;
    rows[x] = std::move(cur);
  }
  return DiscreteChannel(std::vector<double>(ch.priors().begin(), ch.priors().end()), std::move(rows));
}

// ---------------------------------------------------------------------------
// Plain-text matrix format:
//   # comment lines are ignored
//   <priors, whitespace separated>
//   <row for input 0>
//   ...

inline DiscreteChannel parse_channel(std::istream& in) {
  std::vector<std::vector<double>> lines;
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    std::istringstream ls(line);
    std::vector<double> vals;
    std::string tok;
    while (ls >> tok) {
      try {
        std::size_t used = 0;
        vals.push_back(std::stod(tok, &used));
        detail::require(used == tok.size(), "channel", "bad number '" + tok + "'");
      } catch (const std::logic_error&) {
        throw ValidationError("channel", "bad number '" + tok + "'");
      }
    }
    if (!vals.empty()) lines.push_back(std::move(vals));
  }
  detail::require(lines.size() >= 3, "channel", "expected a priors line and at least two rows");
  std::vector<double> priors = std::move(lines.front());
  lines.erase(lines.begin());
  return DiscreteChannel(std::move(priors), std::move(lines));
}

inline void write_channel(std::ostream& out, const DiscreteChannel& ch) {
  auto put = [&out](std::span<const double> v) {
    for (std::size_t i = 0; i < v.size(); ++i) out << (i ? " " : "") << v[i];
    out << '\n';
  };
  out.precision(17);
  put(ch.priors());
  for (std::size_t x = 0; x < ch.inputs(); ++x) put(ch.row(x));
}

}  // namespace sclab
