#pragma once

#include <cstdint>

#include "uhsec/bits.hpp"

namespace uhsec {

/// Counter-based random generator (splitmix64 output function over a keyed
/// counter). Every consumer derives its own substream from a 64-bit master
/// seed, so concurrent or reordered trials stay reproducible.
class CounterRng {
public:
  explicit CounterRng(std::uint64_t key) : key_(key) {}

  std::uint64_t next_u64() { return mix(key_ + (++ctr_) * kGamma); }

  bool next_bit() { return next_u64() >> 63; }

  double next_double01() {
    // 53 random mantissa bits in [0, 1)
    return double(next_u64() >> 11) * 0x1.0p-53;
  }

  /// Uniform in [0, n), rejection sampled.
  std::uint64_t next_below(std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("CounterRng::next_below: n == 0");
    const std::uint64_t lim = ~std::uint64_t(0) - (~std::uint64_t(0) % n);
    for (;;) {
      const std::uint64_t v = next_u64();
      if (v < lim) return v % n;
    }
  }

  /// Independent stream derived from this key; does not advance this one.
  CounterRng substream(std::uint64_t stream) const {
    return CounterRng(mix(key_ ^ mix(stream + kGamma)));
  }

  static std::uint64_t mix(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

private:
  static constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ull;
  std::uint64_t key_ = 0;
  std::uint64_t ctr_ = 0;
};

inline BitVec random_bits(std::size_t n, CounterRng& rng) {
  BitVec v(n);
  for (std::size_t j = 0; j < n; ++j)
    if (rng.next_bit()) v.sig_set(j, true);
  return v;
}

}  // namespace uhsec
