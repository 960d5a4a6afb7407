#pragma once

#include <array>
#include <cstdint>

namespace qrc::rng {

/// SplitMix64 finalizer. Used both as the stream-derivation hash and to
/// expand a single 64-bit seed into engine state.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Derives an independent stream seed from a parent seed and an integer tag.
/// Chained derivation (seed -> substream -> per-item stream) keeps every
/// random source in a run reproducible and order-independent.
constexpr std::uint64_t derive_stream(std::uint64_t seed, std::uint64_t tag) noexcept {
  return mix64(seed + 0x9e3779b97f4a7c15ULL * (tag + 1));
}

/// Named substreams of a single run seed.
enum class Stream : std::uint64_t { Series = 1, Reservoir = 2, Sampling = 3 };

constexpr std::uint64_t derive_stream(std::uint64_t seed, Stream s) noexcept {
  return derive_stream(seed, static_cast<std::uint64_t>(s));
}

/// xoshiro256** engine. Self-contained so draws are bit-identical across
/// platforms and standard libraries; std distributions are never used.
class Xoshiro256 {
public:
  explicit Xoshiro256(std::uint64_t seed) noexcept {
    std::uint64_t x = seed;
    for (auto& w : state_) {
      x += 0x9e3779b97f4a7c15ULL;
      w = mix64(x);
    }
  }

  std::uint64_t next() noexcept {
    const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  /// Uniform double in [0, 1) with 53 bits of precision.
  double uniform() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) noexcept { return lo + uniform() * (hi - lo); }

private:
  static constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept {
    return (x << k) | (x >> (64 - k));
  }

  std::array<std::uint64_t, 4> state_{};
};

}  // namespace qrc::rng
