#pragma once

#include <cstdint>

namespace hrt {

/// SplitMix64 finalizer; a bijective 64-bit mixer.
std::uint64_t mix64(std::uint64_t x);

/// Child seed for an indexed sub-experiment (threshold t, grid point t, ...).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

/// Deterministic stream of uniforms in (0, 1) keyed by (seed, stream_id).
///
/// Streams with different ids are statistically independent SplitMix64 sequences,
/// so sample j, component i can own stream j*N + i and results never depend on
/// the order in which samples are evaluated.
class RandomStream {
 public:
  RandomStream(std::uint64_t seed, std::uint64_t stream_id);

  std::uint64_t next_u64();
  /// Uniform on the open interval (0, 1): (k + 0.5) * 2^-53.
  double next_uniform();

 private:
  std::uint64_t state_;
};

}  // namespace hrt
