#pragma once

#include <cmath>
#include <cstdint>

// Seedable, splittable 64-bit generator used by every stochastic component.
//
// Stream derivation rule (part of the reproducibility contract): the
// generator for a given (seed, a, b, c) tuple is SplitMix64 seeded with
// derive_stream(seed, a, b, c). Monte Carlo uses a = trial index,
// b = linear block index, c = purpose tag; scenario construction uses
// a = RIS index, b = block index, c = purpose tag. Results are therefore
// bit-identical regardless of how trials are sharded across workers.

namespace ris::rng {

inline constexpr std::uint64_t kGoldenGamma = 0x9E3779B97F4A7C15ull;

// finalizer of SplitMix64; a strong 64 -> 64 bit mixer
inline std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

inline std::uint64_t derive_stream(std::uint64_t seed, std::uint64_t a, std::uint64_t b,
                                   std::uint64_t c) {
  std::uint64_t h = mix64(seed + kGoldenGamma);
  h = mix64(h ^ (a + 0xA24BAED4963EE407ull));
  h = mix64(h ^ (b + 0x9FB21C651E98DF25ull));
  h = mix64(h ^ (c + 0xD6E8FEB86659FD93ull));
  return h;
}

class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += kGoldenGamma);
    return mix64(z);
  }

  // uniform on the open interval (0, 1); never returns 0 or 1, so logs of
  // either u or 1-u are always finite
  double next_unit() {
    return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53;
  }

  // uniform on [0, 2*pi)
  double next_angle() {
    return static_cast<double>(next() >> 11) * 0x1.0p-53 * 6.283185307179586476925286766559;
  }

  struct NormalPair {
    double z0, z1;
  };

  // Box-Muller; two independent standard normals per call
  NormalPair next_normal_pair() {
    const double u1 = next_unit();
    const double u2 = next_unit();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double phi = 6.283185307179586476925286766559 * u2;
    return {r * std::cos(phi), r * std::sin(phi)};
  }

 private:
  std::uint64_t state_;
};

}  // namespace ris::rng
