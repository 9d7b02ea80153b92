#pragma once

// Small deterministic RNG used for mask generation and phantom jitter.
// splitmix64 keeps results identical across compilers (the standard library
// distributions are implementation-defined).

#include <cstdint>

namespace kblm {

struct SplitMix64 {
  std::uint64_t state;

  explicit SplitMix64(std::uint64_t seed) : state(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, bound) by rejection; bound > 0.
  std::uint64_t next_below(std::uint64_t bound) {
    const std::uint64_t limit = ~std::uint64_t(0) - ~std::uint64_t(0) % bound;
    std::uint64_t v;
    do {
      v = next();
    } while (v >= limit);
    return v % bound;
  }

  // Uniform double in [0, 1).
  double next_double() { return double(next() >> 11) * 0x1.0p-53; }
};

// Stream seed for per-frame draws: mixes the user seed with the frame index
// so frames can be generated independently and in any order.
inline SplitMix64 frame_stream(std::uint64_t seed, std::uint64_t frame) {
  return SplitMix64(seed ^ (0x9e3779b97f4a7c15ULL * (frame + 1)));
}

}  // namespace kblm
