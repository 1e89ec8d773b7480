#pragma once

#include <cstdint>
#include <string_view>

#include "slk/bitstring.hpp"

namespace slk {

/// SplitMix64 (Steele, Lea, Flood 2014). Chosen over <random> engines and
/// distributions because its output and our bounded draw are fixed by this
/// header, so seeded artifacts are byte-stable across standard libraries.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  /// Uniform in [0, bound) by rejection; bound must be positive.
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    for (;;) {
      const std::uint64_t r = next();
      if (r >= threshold) return r % bound;
    }
  }

  /// True with probability num/den.
  bool chance(std::uint64_t num, std::uint64_t den) { return below(den) < num; }

 private:
  std::uint64_t state_;
};

std::uint64_t fnv1a64(std::string_view bytes);

/// Stream-splitting rule: the substream for node x under `seed` is
/// SplitMix64(seed XOR fnv1a64(render(x))). Each node's draws depend only on
/// (seed, x), so any subset of nodes can be regenerated independently.
inline SplitMix64 node_stream(std::uint64_t seed, const BitString& x) {
  return SplitMix64(seed ^ fnv1a64(x.render()));
}

}  // namespace slk
