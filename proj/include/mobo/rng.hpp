#pragma once

#include <array>
#include <cmath>
#include <cstdint>

namespace mobo {

inline std::uint64_t splitmix64(std::uint64_t& x) {
  x += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = x;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Derives the seed of an independent stream (controller draws, per-experiment
// noise, ...) from a campaign seed.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t x = seed ^ (0xd1342543de82ef95ULL * (stream + 1));
  return splitmix64(x);
}

// xoshiro256**. All randomness in the project flows through this generator:
// campaign transcripts must replay byte-identically, and the standard library
// distributions do not guarantee identical deviate sequences across
// implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) {
    std::uint64_t sm = seed;
    for (auto& w : s_) w = splitmix64(sm);
  }

  static Rng from_state(const std::array<std::uint64_t, 4>& s) {
    Rng r(0);
    r.s_ = s;
    return r;
  }

  const std::array<std::uint64_t, 4>& state() const { return s_; }

  std::uint64_t next() {
    const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  // Uniform in [0,1), 53-bit resolution.
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  // Uniform integer in [0,n). Multiply-shift mapping; the ~n/2^64 bias is
  // irrelevant at campaign scale and the mapping is platform-stable.
  std::uint64_t below(std::uint64_t n) {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(next()) * n) >> 64);
  }

  // Box-Muller, cosine branch only. Two uniforms per draw; no cached spare,
  // so the four state words fully describe the generator in checkpoints.
  double normal(double mean, double sigma) {
    constexpr double kTwoPi = 6.283185307179586476925287;
    const double u1 = 1.0 - uniform01();  // (0,1], keeps log() finite
    const double u2 = uniform01();
    return mean + sigma * std::sqrt(-2.0 * std::log(u1)) * std::cos(kTwoPi * u2);
  }

 private:
  static std::uint64_t rotl(std::uint64_t v, int k) {
    return (v << k) | (v >> (64 - k));
  }

  std::array<std::uint64_t, 4> s_{};
};

}  // namespace mobo
