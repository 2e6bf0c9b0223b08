#pragma once

#include <array>
#include <cstdint>

namespace fiberline {

/**
 * Reproducible random stream identified by (seed, stream_id).
 *
 * Engine is xoshiro256++ whose 256-bit state is filled by SplitMix64 from a
 * mix of the seed and the stream id. Two streams with the same pair produce
 * the same sequence on every platform; the library never reads from global
 * or hardware entropy.
 *
 * Gaussian draws use Marsaglia's polar method; the second variate of each
 * accepted pair is cached, so the cache is part of the stream state.
 *
 * A stream is single-owner mutable state. For parallel work, give each task
 * its own stream via split().
 */
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream_id);

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream_id() const noexcept { return stream_id_; }

  std::uint64_t next_u64() noexcept;
  /// Uniform on [0, 1) with 53 bits of resolution.
  double uniform01() noexcept;
  /// Uniform on [lo, hi).
  double uniform(double lo, double hi) noexcept;
  double gaussian() noexcept;

  /// Child stream; a pure function of (seed, stream_id, id). Does not touch
  /// this stream's state.
  RngStream split(std::uint64_t id) const;

 private:
  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::array<std::uint64_t, 4> state_{};
  double spare_ = 0.0;
  bool has_spare_ = false;
};

/// Root stream (stream_id 0) for a seed.
RngStream make_rng(std::uint64_t seed);

inline RngStream split(const RngStream& rng, std::uint64_t stream_id) {
  return rng.split(stream_id);
}

/// SplitMix64 finalizer; a bijective 64-bit mixer.
std::uint64_t mix64(std::uint64_t x) noexcept;

}  // namespace fiberline
