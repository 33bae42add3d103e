#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>

namespace toi {

/// xorshift64* (Vigna 2016) seeded through one splitmix64 round, so every
/// 64-bit seed (including 0) yields a non-zero state. The output sequence is
/// fully specified here and is identical on every platform:
///
///   state0 = splitmix64(seed)            (replaced by 1 if it is 0)
///   x ^= x >> 12; x ^= x << 25; x ^= x >> 27;
///   output = x * 0x2545F4914F6CDD1D
class Xorshift64Star {
 public:
  explicit Xorshift64Star(std::uint64_t seed) : state_(splitmix64(seed)) {
    if (state_ == 0) state_ = 1;
  }

  std::uint64_t next() {
    state_ ^= state_ >> 12;
    state_ ^= state_ << 25;
    state_ ^= state_ >> 27;
    return state_ * 0x2545F4914F6CDD1DULL;
  }

  /// Uniform in [0, bound) by rejection of the biased low range.
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    for (;;) {
      const std::uint64_t r = next();
      if (r >= threshold) return r % bound;
    }
  }

  static constexpr std::uint64_t splitmix64(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t state_;
};

/// Fisher-Yates: for i = n-1 down to 1, swap items[i] with items[below(i+1)].
template <typename T>
void fisher_yates_shuffle(std::span<T> items, Xorshift64Star& rng) {
  for (std::size_t i = items.size(); i > 1; --i) {
    const auto j = static_cast<std::size_t>(rng.below(i));
    using std::swap;
    swap(items[i - 1], items[j]);
  }
}

}  // namespace toi
