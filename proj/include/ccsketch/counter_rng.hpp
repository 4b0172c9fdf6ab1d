#pragma once

// Counter-based random numbers (Philox4x32-10, Salmon et al. 2011).
//
// Every random quantity in the library is a pure function of
// (key, domain tag, counter words), so entries can be regenerated in any
// order and from any thread without carrying generator state around.

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>

namespace ccsketch {

/// Tags mixed into the counter so that generators seeded with the same
/// 64-bit value never share a stream.
enum class Domain : std::uint32_t {
  design = 0x44455347u,     // "DESG"
  noise = 0x4e4f4953u,      // "NOIS"
  workload = 0x574b4c44u,   // "WKLD"
  derivation = 0x44455256u  // "DERV"
};

using PhiloxCounter = std::array<std::uint32_t, 4>;
using PhiloxKey = std::array<std::uint32_t, 2>;

inline constexpr PhiloxCounter philox4x32(PhiloxCounter ctr, PhiloxKey key) {
  constexpr std::uint32_t kMul0 = 0xD2511F53u;
  constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
  constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
  constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;
  for (int round = 0; round < 10; ++round) {
    const std::uint64_t p0 = std::uint64_t{kMul0} * ctr[0];
    const std::uint64_t p1 = std::uint64_t{kMul1} * ctr[2];
    const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
    const auto lo0 = static_cast<std::uint32_t>(p0);
    const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
    const auto lo1 = static_cast<std::uint32_t>(p1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    key[0] += kWeyl0;
    key[1] += kWeyl1;
  }
  return ctr;
}

inline constexpr PhiloxKey key_from_seed(std::uint64_t seed) {
  return {static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
}

/// Two 64-bit words drawn from (seed, domain, a, b).
struct WordPair {
  std::uint64_t first;
  std::uint64_t second;
};

inline constexpr WordPair counter_words(std::uint64_t seed, Domain domain, std::uint32_t a,
                                        std::uint32_t b) {
  const auto out = philox4x32({a, b, static_cast<std::uint32_t>(domain), 0u}, key_from_seed(seed));
  return {(std::uint64_t{out[0]} << 32) | out[1], (std::uint64_t{out[2]} << 32) | out[3]};
}

/// Uniform on [0, 1) with 53 random bits.
inline constexpr double unit_closed_open(std::uint64_t word) {
  return static_cast<double>(word >> 11) * 0x1p-53;
}

/// Uniform on (0, 1): the 52-bit lattice shifted by half a step, so both
/// extremes (2^-53 and 1 - 2^-53) are exactly representable.
inline constexpr double unit_open(std::uint64_t word) {
  return (static_cast<double>(word >> 12) + 0.5) * 0x1p-52;
}

/// Half-width of the excluded neighbourhoods of 0 and pi for the angle draw.
inline constexpr double kAngleMargin = std::numbers::pi * 0x1p-32;

/// Angle on [eta, pi - eta] from one random word.
inline constexpr double angle_from_word(std::uint64_t word) {
  return kAngleMargin + (std::numbers::pi - 2.0 * kAngleMargin) * unit_closed_open(word);
}

/// Derives an independent 64-bit seed for (master, domain, index).
inline constexpr std::uint64_t derive_seed(std::uint64_t master, Domain domain, std::uint32_t index) {
  return counter_words(master, Domain::derivation, static_cast<std::uint32_t>(domain), index).first;
}

/// Uniform integer on [0, bound) by multiply-shift; bias is below 2^-64 * bound.
inline constexpr std::uint64_t bounded(std::uint64_t word, std::uint64_t bound) {
  return static_cast<std::uint64_t>((static_cast<unsigned __int128>(word) * bound) >> 64);
}

}  // namespace ccsketch
