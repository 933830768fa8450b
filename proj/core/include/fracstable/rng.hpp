// Splittable counter-based random streams. A stream is fully determined by
// (seed, stream_index), so work partitioned by stream index is bitwise
// reproducible under any thread scheduling.
#pragma once

#include <cstdint>

namespace fracstable {

namespace detail {
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}
}  // namespace detail

/// SplitMix64 sequence whose initial state is a hash of (seed, stream).
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream_index) {
    state_ = detail::mix64(seed) ^
             detail::mix64(0xD1B54A32D192ED03ULL * (stream_index + 1));
    state_ = detail::mix64(state_);
  }

  std::uint64_t next_u64() {
    state_ += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  /// Uniform on [0, 1), 53-bit resolution.
  double next_unit() { return (next_u64() >> 11) * 0x1.0p-53; }

  /// Uniform on (0, 1), strictly interior; safe under log and tan.
  double next_unit_open() {
    return (static_cast<double>(next_u64() >> 12) + 0.5) * 0x1.0p-52;
  }

 private:
  std::uint64_t state_;
};

}  // namespace fracstable
