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
#include <cassert>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include "sclab/errors.hpp"
#include "sclab/random.hpp"
#include "sclab/traffic_model.hpp"

namespace sclab {

// Only the total length of a packet is carried; header and payload bytes are
// never materialized, so no downstream computation can depend on content.
struct Packet {
  double time_s = 0.0;
  std::uint32_t length_bytes = 40;
  Direction direction = Direction::kDown;
  bool cover = false;          // inserted by a cover-traffic defense
  bool retransmitted = false;  // delivered by the single retransmission

  friend bool operator==(const Packet&, const Packet&) = default;
};

enum class Layer : std::uint8_t { kPlaintext, kCiphertext, kArrival };

constexpr std::string_view to_string(Layer l) noexcept {
  switch (l) {
    case Layer::kPlaintext: return "plaintext";
    case Layer::kCiphertext: return "ciphertext";
    case Layer::kArrival: return "arrival";
  }
  return "?";
}

struct Provenance {
  int label_id = 0;
  std::uint64_t seed = 0;
};

struct MarkedPacketSequence {
  std::vector<Packet> packets;
  Layer layer = Layer::kPlaintext;
  double window_s = 10.0;
  Provenance provenance;

  std::uint64_t total_bytes() const noexcept {
    std::uint64_t total = 0;
    for (const auto& p : packets) total += p.length_bytes;
    return total;
  }
};

// ---------------------------------------------------------------------------
// Configurations

enum class Segmentation : std::uint8_t { kEager, kNagle };

struct ProtocolConfig {
  std::uint32_t mtu_bytes = 1500;
  std::uint32_t header_bytes = 40;
  Segmentation segmentation = Segmentation::kEager;
  double nagle_delay_s = 0.04;
  double pacing_jitter_s = 0.0;  // half-normal send-time spread per packet

  std::uint32_t payload_capacity() const noexcept { return mtu_bytes - header_bytes; }
};

inline void validate(const ProtocolConfig& c) {
  detail::require(c.mtu_bytes > c.header_bytes, "mtu_bytes", "must exceed header_bytes");
  detail::require_non_negative(c.nagle_delay_s, "nagle_delay_s");
  detail::require_non_negative(c.pacing_jitter_s, "pacing_jitter_s");
}

enum class PadPolicy : std::uint8_t { kNone, kPadToBlock, kPadToFixed, kRandomPad };

constexpr std::string_view to_string(PadPolicy p) noexcept {
  switch (p) {
    case PadPolicy::kNone: return "none";
    case PadPolicy::kPadToBlock: return "block";
    case PadPolicy::kPadToFixed: return "fixed";
    case PadPolicy::kRandomPad: return "random";
  }
  return "?";
}

struct Padding {
  PadPolicy policy = PadPolicy::kNone;
  std::uint32_t block_bytes = 16;
  std::uint32_t target_bytes = 1500;  // pad-to-fixed cell size
  std::uint32_t max_extra_bytes = 0;  // random-pad upper bound

  friend bool operator==(const Padding&, const Padding&) = default;
};

struct EncryptionConfig {
  std::uint32_t record_overhead_bytes = 22;
  Padding padding;
  double processing_delay_s = 20e-6;
};

inline void validate(const Padding& p) {
  if (p.policy == PadPolicy::kPadToBlock)
    detail::require(p.block_bytes > 0, "block_bytes", "must be > 0 for pad-to-block");
  if (p.policy == PadPolicy::kPadToFixed)
    detail::require(p.target_bytes > 0, "target_bytes", "must be > 0 for pad-to-fixed");
}

inline void validate(const EncryptionConfig& c) {
  validate(c.padding);
  detail::require_non_negative(c.processing_delay_s, "processing_delay_s");
}

struct NetworkConfig {
  double base_latency_s = 0.001;
  double jitter_s = 0.0002;
  double loss_probability = 0.001;
  double retransmit_delay_s = 0.05;
  double reorder_probability = 0.0;
};

inline void validate(const NetworkConfig& c) {
  detail::require_non_negative(c.base_latency_s, "base_latency_s");
  detail::require_non_negative(c.jitter_s, "jitter_s");
  detail::require(std::isfinite(c.loss_probability) && c.loss_probability >= 0.0 &&
                      c.loss_probability < 1.0,
                  "loss_probability", "must lie in [0, 1)");
  detail::require_non_negative(c.retransmit_delay_s, "retransmit_delay_s");
  detail::require(std::isfinite(c.reorder_probability) && c.reorder_probability >= 0.0 &&
                      c.reorder_probability < 1.0,
                  "reorder_probability", "must lie in [0, 1)");
}

struct FeatureSet {
  bool lengths = true;
  bool times = true;
  bool directions = true;
  bool aggregates = true;
};

// A granule of 0 disables that quantizer.
struct ObservationConfig {
  double time_granule_s = 1e-6;
  double length_granule_bytes = 1.0;
  double keep_probability = 1.0;
  FeatureSet features;
};

inline void validate(const ObservationConfig& c) {
  detail::require_non_negative(c.time_granule_s, "time_granule_s");
  detail::require_non_negative(c.length_granule_bytes, "length_granule_bytes");
  detail::require(std::isfinite(c.keep_probability) && c.keep_probability > 0.0 &&
                      c.keep_probability <= 1.0,
                  "keep_probability", "must lie in (0, 1]");
}

// Defense vector applied between encryption and transmission.
struct DefenseParams {
  std::optional<Padding> pad_override;
  double added_delay_s = 0.0;
  double cover_rate_hz = 0.0;  // dummy packets per second, both directions

  bool is_identity() const noexcept {
    return !pad_override && added_delay_s == 0.0 && cover_rate_hz == 0.0;
  }
};

inline void validate(const DefenseParams& d) {
  if (d.pad_override) validate(*d.pad_override);
  detail::require_non_negative(d.added_delay_s, "added_delay_s");
  detail::require_non_negative(d.cover_rate_hz, "cover_rate_hz");
}

// ---------------------------------------------------------------------------
// Operators

namespace detail {

inline void sort_by_time(std::vector<Packet>& packets) {
  std::stable_sort(packets.begin(), packets.end(),
                   [](const Packet& a, const Packet& b) { return a.time_s < b.time_s; });
}

inline void require_layer(const MarkedPacketSequence& s, Layer expected) {
  require(s.layer == expected, "layer",
          "expected " + std::string(to_string(expected)) + " input, got " +
              std::string(to_string(s.layer)));
}

}  // namespace detail

// Operator Pi: segments messages into packets of at most mtu bytes. A packet
// is never sent before the latest message contributing bytes to it.
inline MarkedPacketSequence encapsulate(const MessageSequence& msgs, const ProtocolConfig& cfg,
                                        std::uint64_t seed) {
  validate(cfg);
  MarkedPacketSequence out;
  out.layer = Layer::kPlaintext;
  out.window_s = msgs.window_s;
  out.provenance = {msgs.label.id, seed};

  CounterRng rng(derive_seed(seed, Stream::kProtocol));
  const std::uint32_t cap = cfg.payload_capacity();
  auto emit = [&](std::uint32_t payload, double t, Direction dir) {
    const double send = t + rng.half_normal(cfg.pacing_jitter_s);
    out.packets.push_back(Packet{send, payload + cfg.header_bytes, dir});
  };

  if (cfg.segmentation == Segmentation::kEager) {
    for (const auto& m : msgs.events) {
      detail::require(m.size_bytes > 0, "size_bytes", "message size must be >= 1");
      std::uint32_t remaining = m.size_bytes;
      while (remaining > 0) {
        const std::uint32_t chunk = std::min(remaining, cap);
        emit(chunk, m.time_s, m.direction);
        remaining -= chunk;
      }
    }
  } else {
    // Nagle-like coalescing per direction: partial segments wait at most
    // nagle_delay_s from the first buffered byte.
    struct Buffer {
      bool active = false;
      double start = 0.0;
      std::uint64_t bytes = 0;
    };
    Buffer buffers[2];
    auto flush = [&](Buffer& b, Direction dir) {
      if (b.active && b.bytes > 0)
        emit(static_cast<std::uint32_t>(b.bytes), b.start + cfg.nagle_delay_s, dir);
      b = Buffer{};
    };
    for (const auto& m : msgs.events) {
      detail::require(m.size_bytes > 0, "size_bytes", "message size must be >= 1");
      Buffer& b = buffers[static_cast<int>(m.direction)];
      if (b.active && m.time_s - b.start >= cfg.nagle_delay_s) flush(b, m.direction);
      if (!b.active) b = Buffer{true, m.time_s, 0};
      b.bytes += m.size_bytes;
      while (b.bytes >= cap) {
        emit(cap, m.time_s, m.direction);
        b.bytes -= cap;
      }
      if (b.bytes == 0) b = Buffer{};
    }
    flush(buffers[0], Direction::kUp);
    flush(buffers[1], Direction::kDown);
  }
  detail::sort_by_time(out.packets);
  return out;
}

// g_len: ciphertext length for a plaintext packet length. Deterministic for
// every policy except random-pad, which reads `rng`.
inline std::uint32_t ciphertext_length(std::uint32_t length, std::uint32_t record_overhead,
                                       const Padding& pad, CounterRng& rng) {
  const std::uint64_t base = std::uint64_t{length} + record_overhead;
  auto round_up = [](std::uint64_t v, std::uint64_t g) { return g * ((v + g - 1) / g); };
  std::uint64_t out = base;
  switch (pad.policy) {
    case PadPolicy::kNone: break;
    case PadPolicy::kPadToBlock: out = round_up(base, pad.block_bytes); break;
    case PadPolicy::kPadToFixed: out = round_up(base, pad.target_bytes); break;
    case PadPolicy::kRandomPad: out = base + rng.below(std::uint64_t{pad.max_extra_bytes} + 1); break;
  }
  return static_cast<std::uint32_t>(out);
}

// Operator Phi.
inline MarkedPacketSequence encrypt(const MarkedPacketSequence& pkts, const EncryptionConfig& cfg,
                                    std::uint64_t seed = 0) {
  detail::require_layer(pkts, Layer::kPlaintext);
  validate(cfg);
  MarkedPacketSequence out = pkts;
  out.layer = Layer::kCiphertext;
  CounterRng rng(derive_seed(seed, Stream::kEncryption));
  for (auto& p : out.packets) {
    p.length_bytes = ciphertext_length(p.length_bytes, cfg.record_overhead_bytes, cfg.padding, rng);
    p.time_s += cfg.processing_delay_s;
  }
  return out;
}

// Timing perturbation and cover traffic on the ciphertext stream. Cover
// lengths are drawn from the stream's own length marginal.
inline MarkedPacketSequence apply_defense(const MarkedPacketSequence& pkts, const DefenseParams& d,
                                          std::uint32_t fallback_length, std::uint64_t seed) {
  detail::require_layer(pkts, Layer::kCiphertext);
  validate(d);
  MarkedPacketSequence out = pkts;
  for (auto& p : out.packets) p.time_s += d.added_delay_s;
  if (d.cover_rate_hz > 0.0) {
    CounterRng rng(derive_seed(seed, Stream::kDefense));
    const std::size_t real = pkts.packets.size();
    double t = rng.exponential(d.cover_rate_hz);
    while (t < out.window_s) {
      Packet c;
      c.time_s = t;
      c.length_bytes = real > 0 ? pkts.packets[rng.below(real)].length_bytes : fallback_length;
      c.direction = rng.bernoulli(0.5) ? Direction::kUp : Direction::kDown;
      c.cover = true;
      out.packets.push_back(c);
      t += rng.exponential(d.cover_rate_hz);
    }
    detail::sort_by_time(out.packets);
  }
  return out;
}

// Operator N: latency, half-normal jitter, single-shot retransmission of lost
// packets, optional adjacent reordering of marks.
inline MarkedPacketSequence transmit(const MarkedPacketSequence& pkts, const NetworkConfig& cfg,
                                     std::uint64_t seed) {
  detail::require_layer(pkts, Layer::kCiphertext);
  validate(cfg);
  MarkedPacketSequence out = pkts;
  out.layer = Layer::kArrival;
  CounterRng rng(derive_seed(seed, Stream::kNetwork));
  for (auto& p : out.packets) {
    const double send = p.time_s;
    double arrival = send + cfg.base_latency_s + rng.half_normal(cfg.jitter_s);
    if (cfg.loss_probability > 0.0 && rng.bernoulli(cfg.loss_probability)) {
      arrival = send + cfg.retransmit_delay_s + cfg.base_latency_s + rng.half_normal(cfg.jitter_s);
      p.retransmitted = true;
    }
    assert(arrival >= send);
    p.time_s = arrival;
  }
  detail::sort_by_time(out.packets);
  if (cfg.reorder_probability > 0.0) {
    for (std::size_t i = 0; i + 1 < out.packets.size(); ++i) {
      if (!rng.bernoulli(cfg.reorder_probability)) continue;
      auto& a = out.packets[i];
      auto& b = out.packets[i + 1];
      std::swap(a.length_bytes, b.length_bytes);
      std::swap(a.direction, b.direction);
      std::swap(a.cover, b.cover);
      std::swap(a.retransmitted, b.retransmitted);
    }
  }
  return out;
}

// Window-level aggregates, computed after sampling and quantization.
struct WindowAggregates {
  std::uint64_t total_bytes = 0;
  std::uint64_t packet_count = 0;
  std::uint64_t up_count = 0;
  std::uint64_t down_count = 0;
  double mean_interarrival_s = 0.0;  // 0 when fewer than two packets

  friend bool operator==(const WindowAggregates&, const WindowAggregates&) = default;
};

// Observed features Y for one session window.
struct FeatureRecord {
  std::optional<std::vector<std::uint32_t>> lengths;
  std::optional<std::vector<double>> times;
  std::optional<std::vector<Direction>> directions;
  std::optional<WindowAggregates> aggregates;
  double window_s = 10.0;

  friend bool operator==(const FeatureRecord&, const FeatureRecord&) = default;
};

// Operator Theta: the observer sees arrivals inside [0, window], keeps each
// with `keep_probability`, floors timestamps and rounds lengths up to their
// granules.
inline FeatureRecord observe(const MarkedPacketSequence& pkts, const ObservationConfig& cfg,
                             std::uint64_t seed) {
  detail::require_layer(pkts, Layer::kArrival);
  validate(cfg);
  CounterRng rng(derive_seed(seed, Stream::kObservation));

  std::vector<std::uint32_t> lengths;
  std::vector<double> times;
  std::vector<Direction> dirs;
  for (const auto& p : pkts.packets) {
    if (p.time_s < 0.0 || p.time_s > pkts.window_s) continue;
    if (cfg.keep_probability < 1.0 && !rng.bernoulli(cfg.keep_probability)) continue;
    double t = p.time_s;
    if (cfg.time_granule_s > 0.0) t = std::floor(t / cfg.time_granule_s) * cfg.time_granule_s;
    double len = p.length_bytes;
    if (cfg.length_granule_bytes > 0.0)
      len = std::ceil(len / cfg.length_granule_bytes) * cfg.length_granule_bytes;
    lengths.push_back(static_cast<std::uint32_t>(len));
    times.push_back(t);
    dirs.push_back(p.direction);
  }

  FeatureRecord rec;
  rec.window_s = pkts.window_s;
  if (cfg.features.aggregates) {
    WindowAggregates agg;
    agg.packet_count = lengths.size();
    for (std::size_t i = 0; i < lengths.size(); ++i) {
      agg.total_bytes += lengths[i];
      (dirs[i] == Direction::kUp ? agg.up_count : agg.down_count) += 1;
    }
    if (times.size() >= 2)
      agg.mean_interarrival_s = (times.back() - times.front()) / static_cast<double>(times.size() - 1);
    rec.aggregates = agg;
  }
  if (cfg.features.lengths) rec.lengths = std::move(lengths);
  if (cfg.features.times) rec.times = std::move(times);
  if (cfg.features.directions) rec.directions = std::move(dirs);
  return rec;
}

// ---------------------------------------------------------------------------
// Composition X -> Xi_A -> Xi_P -> Xi_C -> Xi_N -> Y

struct ChainConfig {
  ProtocolConfig protocol;
  EncryptionConfig encryption;
  NetworkConfig network;
  ObservationConfig observation;
  DefenseParams defense;
};

inline void validate(const ChainConfig& c) {
  validate(c.protocol);
  validate(c.encryption);
  validate(c.network);
  validate(c.observation);
  validate(c.defense);
}

// Every layer is the identity on (time, length, direction).
inline ChainConfig identity_chain_config() {
  ChainConfig c;
  c.encryption = EncryptionConfig{0, Padding{}, 0.0};
  c.network = NetworkConfig{0.0, 0.0, 0.0, 0.0, 0.0};
  c.observation = ObservationConfig{0.0, 0.0, 1.0, FeatureSet{}};
  return c;
}

struct ChainTrace {
  MessageSequence messages;
  MarkedPacketSequence plaintext;
  MarkedPacketSequence ciphertext;
  MarkedPacketSequence arrival;
  FeatureRecord features;
};

// Runs one session through every layer. Layer seeds are fixed labeled splits
// of `seed`.
inline ChainTrace propagate(MessageSequence msgs, const ChainConfig& cfg, std::uint64_t seed) {
  validate(cfg);
  ChainTrace trace;
  trace.plaintext = encapsulate(msgs, cfg.protocol, seed);
  EncryptionConfig enc = cfg.encryption;
  if (cfg.defense.pad_override) enc.padding = *cfg.defense.pad_override;
  trace.ciphertext = encrypt(trace.plaintext, enc, seed);
  if (!cfg.defense.is_identity()) {
    trace.ciphertext = apply_defense(trace.ciphertext, cfg.defense,
                                     cfg.protocol.mtu_bytes + enc.record_overhead_bytes, seed);
  }
  trace.arrival = transmit(trace.ciphertext, cfg.network, seed);
  trace.features = observe(trace.arrival, cfg.observation, seed);
  trace.messages = std::move(msgs);
  return trace;
}

inline ChainTrace run_chain(const SemanticLabel& label, const TrafficProfile& profile,
                            const ChainConfig& cfg, double window_s, std::uint64_t seed) {
  return propagate(generate_session(label, profile, window_s, seed), cfg, seed);
}

}  // namespace sclab
