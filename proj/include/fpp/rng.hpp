#pragma once

#include <cmath>
#include <cstdint>

namespace fpp {

// SplitMix64 finaliser.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Keyed two-round hash: a stateless pseudorandom function of (key, counter).
// The second round breaks the additive structure that plain SplitMix
// sequences share across keys.
class Prf {
 public:
  constexpr explicit Prf(std::uint64_t key) noexcept
      : k1_(mix64(key ^ 0x6a09e667f3bcc909ULL)), k2_(mix64(key + 0x3c6ef372fe94f82bULL)) {}

  constexpr std::uint64_t operator()(std::uint64_t counter) const noexcept {
    return mix64(mix64(counter + k1_) ^ k2_);
  }

 private:
  std::uint64_t k1_;
  std::uint64_t k2_;
};

inline constexpr double kTwoPow53Inv = 1.0 / 9007199254740992.0;

// Top 53 bits as a uniform on [0, 1).
constexpr double to_unit(std::uint64_t bits) noexcept {
  return static_cast<double>(bits >> 11) * kTwoPow53Inv;
}

// E = -log(1 - U) with U in [0, 1): strictly positive and finite.
inline double to_exponential(std::uint64_t bits) noexcept {
  return -std::log1p(-to_unit(bits));
}

// Sequential stream over the same PRF; single owner, not thread-safe.
class Stream {
 public:
  Stream(std::uint64_t seed, std::uint64_t stream_id) noexcept
      : prf_(mix64(seed) ^ mix64(stream_id + 0x9e3779b97f4a7c15ULL)) {}

  std::uint64_t next_u64() noexcept { return prf_(counter_++); }
  double uniform() noexcept { return to_unit(next_u64()); }
  // Uniform on (0, 1): never exactly zero.
  double uniform_open() noexcept {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * kTwoPow53Inv;
  }
  double exponential() noexcept { return to_exponential(next_u64()); }

 private:
  Prf prf_;
  std::uint64_t counter_ = 0;
};

// Derived seed for replication r of a run.
constexpr std::uint64_t replication_seed(std::uint64_t master, std::uint64_t r) noexcept {
  return master ^ mix64(r + 0x2545f4914f6cdd1dULL);
}

}  // namespace fpp
