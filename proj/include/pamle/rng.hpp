#pragma once

#include <cstdint>
#include <random>

namespace pamle {

/// SplitMix64 output function. Used as a key mixer so that nearby
/// (seed, stream) pairs map to well-separated engine seeds.
inline constexpr std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Engine seed for stream `stream` of master seed `seed`: the
/// (stream+1)-th output of the SplitMix64 sequence started at `seed`.
inline constexpr std::uint64_t derive_stream_key(std::uint64_t seed, std::uint64_t stream) {
  return splitmix64(seed + 0x9e3779b97f4a7c15ULL * stream);
}

/// Reproducible random stream keyed by (seed, stream index).
///
/// Streams are independent of scheduling: stream k of a run is the same
/// bit sequence whether replicates run serially or on a thread pool.
/// All draws go through our own uniform helpers (not std distributions),
/// so output is identical across standard library implementations.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed, std::uint64_t stream = 0)
      : engine_(derive_stream_key(seed, stream)) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform on [0,1), 53 random bits.
  double next_double() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Unbiased uniform draw from {0, 1, ..., n-1}, n >= 1.
  std::uint64_t next_below(std::uint64_t n) {
    const std::uint64_t lo = (0ULL - n) % n;  // 2^64 mod n
    std::uint64_t x;
    do {
      x = engine_();
    } while (x < lo);
    return x % n;
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace pamle
