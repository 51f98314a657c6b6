#pragma once

#include <cstdint>
#include <random>

namespace redsim {

std::uint64_t splitmix64(std::uint64_t x) noexcept;

// Seed of trajectory `index` within an ensemble run with `master_seed`.
// Streams for different indices are decorrelated by two splitmix rounds.
std::uint64_t stream_seed(std::uint64_t master_seed, std::uint64_t index) noexcept;

// Per-trajectory random stream. Engine and derivations are fully specified,
// so draws are identical across standard libraries.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed = 0) : engine_(seed) {}

  // Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  // Uniform on {0, ..., n-1}; n must be > 0.
  std::uint64_t below(std::uint64_t n);

  friend bool operator==(const RandomStream&, const RandomStream&) = default;

 private:
  std::mt19937_64 engine_;
};

}  // namespace redsim
