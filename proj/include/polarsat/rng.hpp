#pragma once

#include <cstdint>

namespace polarsat::rng {

// Counter-based pseudo-randomness: every word is a pure function of
// (seed, position), so streams are random-access and safe to share between
// any number of workers.

inline constexpr uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

// SplitMix64 finalizer.
[[nodiscard]] constexpr uint64_t mix(uint64_t z) {
  z ^= z >> 30;
  z *= 0xbf58476d1ce4e5b9ULL;
  z ^= z >> 27;
  z *= 0x94d049bb133111ebULL;
  z ^= z >> 31;
  return z;
}

// Word `pos` of the stream rooted at `seed`.
[[nodiscard]] constexpr uint64_t word(uint64_t seed, uint64_t pos) {
  return mix(seed + kGolden * (pos + 1));
}

// Child seed for substream `salt` (trials, clauses, channels, ...).
[[nodiscard]] constexpr uint64_t derive(uint64_t seed, uint64_t salt) {
  return mix(seed ^ word(0x8e221045'9c9c5417ULL, salt));
}

[[nodiscard]] constexpr uint64_t derive(uint64_t seed, uint64_t a, uint64_t b) {
  return derive(derive(seed, a), b);
}

// Map a word to [0,1) with 53 random bits.
[[nodiscard]] constexpr double to_unit(uint64_t w) {
  return static_cast<double>(w >> 11) * 0x1.0p-53;
}

// Exact uniform draw in [0,n) (multiply-shift with rejection); advances pos.
[[nodiscard]] inline uint64_t bounded(uint64_t seed, uint64_t& pos, uint64_t n) {
  const uint64_t threshold = (0 - n) % n;  // 2^64 mod n
  for (;;) {
    const uint64_t x = word(seed, pos++);
    const auto m = static_cast<unsigned __int128>(x) * n;
    if (static_cast<uint64_t>(m) >= threshold) return static_cast<uint64_t>(m >> 64);
  }
}

}  // namespace polarsat::rng
