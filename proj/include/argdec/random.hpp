#pragma once

#include <cstddef>
#include <cstdint>

namespace argdec {

/// SplitMix64. Small, seedable and splittable, with output that is identical
/// on every platform (unlike std::uniform_int_distribution).
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// An independent generator derived from this one.
  SplitMix64 split() { return SplitMix64(next() ^ 0x6a09e667f3bcc909ULL); }

  /// Uniform in [0, n) by rejection; n must be positive.
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x;
    do {
      x = next();
    } while (x >= limit);
    return x % n;
  }

  /// Uniform in [0, 1).
  double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

 private:
  std::uint64_t state_;
};

/// Index of the uniformly picked element among `n` tied candidates.
inline std::size_t pick_index(std::uint64_t seed, std::size_t n) {
  SplitMix64 rng(seed);
  return static_cast<std::size_t>(rng.below(n));
}

}  // namespace argdec
