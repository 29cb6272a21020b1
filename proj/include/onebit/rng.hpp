#pragma once

#include <array>
#include <cstdint>
#include <limits>

#include <boost/random/normal_distribution.hpp>

namespace onebit {

/// Philox4x32-10 counter-based generator (Salmon et al., SC'11).
///
/// A stream is identified by a 64-bit key and a 64-bit stream id; the
/// remaining 64 counter bits index blocks within the stream. Streams for
/// different (key, stream id) pairs are statistically independent, so a
/// replication can be regenerated without replaying any other replication.
/// Satisfies UniformRandomBitGenerator with 64-bit output.
class Philox4x32 {
 public:
  using result_type = std::uint64_t;

  Philox4x32(std::uint64_t key, std::uint64_t stream_id) noexcept;

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  result_type operator()() noexcept {
    if (lane_ == 2) refill();
    return buffer_[lane_++];
  }

  /// Skips to block `block` of the stream (each block yields two outputs).
  void seek(std::uint64_t block) noexcept;

  /// Raw block function, exposed for known-answer tests.
  static std::array<std::uint32_t, 4> block(std::array<std::uint32_t, 4> counter,
                                            std::array<std::uint32_t, 2> key) noexcept;

 private:
  void refill() noexcept;

  std::array<std::uint32_t, 2> key_;
  std::uint64_t stream_id_;
  std::uint64_t block_index_ = 0;
  std::array<result_type, 2> buffer_{};
  int lane_ = 2;
};

/// SplitMix64 finalizer; used to spread user seeds over the key space.
std::uint64_t mix64(std::uint64_t x) noexcept;

/// Named purposes so that independent draws inside one replication never share a stream.
enum class StreamPurpose : std::uint32_t { SensorNoise = 1, ExitTimeOracle = 2, Auxiliary = 3 };

/// Derives the generator for replication `replication` of an experiment seeded with
/// `master_seed`. The result depends only on the arguments, never on execution order.
Philox4x32 replication_stream(std::uint64_t master_seed, std::uint64_t replication,
                              StreamPurpose purpose = StreamPurpose::SensorNoise) noexcept;

/// Standard normal sampler bound to a generator.
class NormalSource {
 public:
  explicit NormalSource(Philox4x32 engine) : engine_(engine) {}

  double operator()() { return dist_(engine_); }
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

 private:
  Philox4x32 engine_;
  // Ziggurat sampler; stateless between calls, so output is a pure function of the stream.
  boost::random::normal_distribution<double> dist_;
};

}  // namespace onebit
