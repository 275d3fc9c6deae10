#pragma once

#include <cstdint>
#include <limits>
#include <string_view>

namespace schedrisk {

/// SplitMix64 finalizer (Stafford variant 13).
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// FNV-1a; stable key for entity ids.
constexpr std::uint64_t hash_id(std::string_view id) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : id) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

/// Counter-based random stream. The sequence depends only on the key
/// (seed, run, entity, slot), so any run can be regenerated in isolation and
/// results do not depend on how runs are distributed across threads.
/// Satisfies UniformRandomBitGenerator.
class Stream {
 public:
  using result_type = std::uint64_t;

  static constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ULL;

  Stream(std::uint64_t seed, std::uint64_t run, std::uint64_t entity, std::uint64_t slot) noexcept
      : state_(mix64(mix64(mix64(mix64(seed) ^ run) ^ (entity + kGamma)) ^ (slot * kGamma + 1))) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  result_type operator()() noexcept {
    state_ += kGamma;
    return mix64(state_);
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

 private:
  std::uint64_t state_;
};

}  // namespace schedrisk
