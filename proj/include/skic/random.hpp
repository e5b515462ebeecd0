#pragma once

#include <cstdint>
#include <vector>

namespace skic {

// SplitMix64 (Steele, Lea, Flood 2014). Used for every pinned fixture so goldens
// do not depend on the standard library's distributions.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1) with 53 bits.
  double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // Uniform in [-1, 1).
  double symmetric() { return 2.0 * unit() - 1.0; }

  // Uniform in [0, n) by rejection-free modulo; bias is irrelevant for test generation.
  std::uint64_t below(std::uint64_t n) { return next() % n; }

 private:
  std::uint64_t state_;
};

// Low 8 bits of successive outputs.
inline std::vector<unsigned char> prng_bytes(std::uint64_t seed, std::size_t count) {
  SplitMix64 rng(seed);
  std::vector<unsigned char> out(count);
  for (auto& b : out) b = static_cast<unsigned char>(rng.next() & 0xffU);
  return out;
}

}  // namespace skic
