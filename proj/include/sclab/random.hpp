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

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>

namespace sclab {

// SplitMix64 finalizer. Bijective on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Fixed stream constants. Each layer of the channel (and each auxiliary
// consumer of randomness) draws from its own stream so re-running one
// operator never perturbs another.
enum class Stream : std::uint64_t {
  kTrial = 0x7472696100000000ULL,
  kApplication = 0x6170706c00000001ULL,
  kProtocol = 0x70726f7400000002ULL,
  kEncryption = 0x656e637200000003ULL,
  kNetwork = 0x6e65747700000004ULL,
  kObservation = 0x6f62737600000005ULL,
  kDefense = 0x6465666e00000006ULL,
  kSampler = 0x73616d7000000007ULL,
  kHoldout = 0x686f6c6400000008ULL,
};

// Child seed for (stream, index) under `seed`: the master seed is XOR'd with
// the stream constant and a mixed index, then whitened.
constexpr std::uint64_t derive_seed(std::uint64_t seed, Stream stream,
                                    std::uint64_t index = 0) noexcept {
  return mix64(seed ^ static_cast<std::uint64_t>(stream) ^ mix64(index));
}

// Counter-based generator: draw k is mix64(key + k * gamma). Any draw can be
// recomputed from (key, k) alone.
//
// The variate transforms below are written out rather than taken from
// <random> because the standard distributions are implementation-defined;
// outputs must be identical across standard libraries.
class CounterRng {
 public:
  using result_type = std::uint64_t;

  explicit constexpr CounterRng(std::uint64_t key) noexcept : key_(mix64(key)) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept {
    return std::numeric_limits<result_type>::max();
  }

  constexpr result_type operator()() noexcept {
    ++counter_;
    return mix64(key_ + counter_ * 0xd1342543de82ef95ULL);
  }

  std::uint64_t counter() const noexcept { return counter_; }

  // Uniform on [0, 1) with 53 bits of resolution.
  double uniform() noexcept {
    return static_cast<double>((*this)() >> 11) * 0x1.0p-53;
  }

  // Uniform on (0, 1).
  double uniform_open() noexcept {
    return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }

  // Uniform integer in [0, n). n must be > 0.
  std::uint64_t below(std::uint64_t n) noexcept {
    // Lemire's multiply-shift; the residual bias is < n / 2^64.
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>((*this)()) * n) >> 64);
  }

  bool bernoulli(double p) noexcept { return uniform() < p; }

  // Standard normal via Box-Muller; consumes exactly two draws.
  double normal() noexcept {
    const double u1 = uniform_open();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

  double normal(double mean, double sd) noexcept { return mean + sd * normal(); }

  // Normal(0, sd) truncated at zero, i.e. half-normal.
  double half_normal(double sd) noexcept { return sd > 0.0 ? std::fabs(sd * normal()) : 0.0; }

  double exponential(double rate) noexcept { return -std::log(uniform_open()) / rate; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace sclab
