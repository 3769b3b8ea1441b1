#pragma once

#include <cstdint>
#include <vector>

namespace meanders {

namespace detail {
inline std::uint64_t mix64(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xBF58476D1CE4E5B9ull;
  z ^= z >> 27;
  z *= 0x94D049BB133111EBull;
  z ^= z >> 31;
  return z;
}
}  // namespace detail

// Counter-based stream generator: output i of stream s is a bijective mix of
// base(seed, s) + i * gamma(s), so identical (seed, stream) gives an identical
// sequence on any platform and under any thread layout. Each stream runs on
// its own odd increment, which keeps distinct streams on distinct orbits.
class RngStream {
 public:
  RngStream(std::uint64_t master_seed, std::uint64_t stream) {
    state_ = detail::mix64(master_seed + 0x9E3779B97F4A7C15ull * (stream + 1));
    gamma_ = detail::mix64(stream ^ 0xD1B54A32D192ED03ull) | 1ull;
  }

  std::uint64_t next_u64() {
    state_ += gamma_;
    return detail::mix64(state_);
  }

  // Uniform double in [0, 1), 53 random bits.
  double next_unit() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Uniform integer in [0, bound), bound >= 1. Lemire's method, unbiased.
  std::uint64_t below(std::uint64_t bound) {
    std::uint64_t x = next_u64();
    __uint128_t m = static_cast<__uint128_t>(x) * bound;
    auto lo = static_cast<std::uint64_t>(m);
    if (lo < bound) {
      const std::uint64_t threshold = (0 - bound) % bound;
      while (lo < threshold) {
        x = next_u64();
        m = static_cast<__uint128_t>(x) * bound;
        lo = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::uint64_t>(m >> 64);
  }

  // Fisher-Yates; deterministic (does not rely on std::shuffle dispatch).
  template <class T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      const std::size_t j = static_cast<std::size_t>(below(i));
      std::swap(v[i - 1], v[j]);
    }
  }

 private:
  std::uint64_t state_;
  std::uint64_t gamma_;
};

}  // namespace meanders
