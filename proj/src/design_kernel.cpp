// Vectorized generation of design entries.
//
// Built with -ffast-math so that sin/log/exp inside the omp simd loops map
// onto the glibc vector math library. Nothing outside this file consumes
// entries except through design_segment(), so all callers agree bit for bit.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "ccsketch/counter_rng.hpp"
#include "ccsketch/sketch.hpp"

namespace ccsketch {

namespace {

std::atomic<std::uint64_t> g_entries{0};

struct Transform {
  double alpha;
  double inv_alpha;
  double cos_half_pi_alpha;  // cos(alpha pi / 2)
};

constexpr std::uint64_t kLow32 = 0xffffffffu;

// philox4x32 with every 32-bit word held in a 64-bit lane, which lets the
// vectorizer use the cheap 32x32->64 multiply. Bit-identical to philox4x32.
inline void philox_lanes(std::uint64_t& c0, std::uint64_t& c1, std::uint64_t& c2,
                         std::uint64_t& c3, std::uint64_t k0, std::uint64_t k1) {
#pragma GCC unroll 10
  for (int round = 0; round < 10; ++round) {
    const std::uint64_t p0 = 0xD2511F53u * (c0 & kLow32);
    const std::uint64_t p1 = 0xCD9E8D57u * (c2 & kLow32);
    const std::uint64_t n0 = ((p1 >> 32) ^ c1 ^ k0) & kLow32;
    const std::uint64_t n2 = ((p0 >> 32) ^ c3 ^ k1) & kLow32;
    c0 = n0;
    c1 = p1 & kLow32;
    c2 = n2;
    c3 = p0 & kLow32;
    k0 = (k0 + 0x9E3779B9u) & kLow32;
    k1 = (k1 + 0xBB67AE85u) & kLow32;
  }
}

// s = sin(a u) / [sin u cos(a pi/2)]^(1/a) * [sin(u - a u) / w]^((1-a)/a)
//   = sin(a u) (w / s2) X^(1/a),  X = s2 / (w sin u cos(a pi/2)),  s2 = sin(u - a u)
void fill_block(const Transform& c, PhiloxKey key, std::uint32_t i, std::uint32_t j0,
                double* out) {
  const std::uint64_t tag = static_cast<std::uint32_t>(Domain::design);
  const double a = c.alpha;
  const double inv_a = c.inv_alpha;
  const double cos_a = c.cos_half_pi_alpha;
#pragma omp simd
  for (std::uint32_t l = 0; l < kDesignBlock; ++l) {
    std::uint64_t c0 = i, c1 = j0 + l, c2 = tag, c3 = 0;
    philox_lanes(c0, c1, c2, c3, key[0], key[1]);
    const double u = angle_from_word((c0 << 32) | c1);
    const double w = -std::log(unit_open((c2 << 32) | c3));
    const double sin_u = std::sin(std::fmin(u, std::numbers::pi - u));
    const double s2 = std::sin(u - a * u);
    out[l] = std::sin(a * u) * (w / s2) * std::exp(inv_a * std::log(s2 / (w * sin_u * cos_a)));
  }
}

}  // namespace

void design_segment(const DesignSpec& spec, std::uint64_t i, std::uint64_t j_begin,
                    std::span<double> out) {
  if (i >= spec.n) throw std::out_of_range("design row index out of range");
  if (j_begin % kDesignBlock != 0 || out.size() % kDesignBlock != 0) {
    throw std::invalid_argument("design_segment requires block-aligned ranges");
  }
  const double a = spec.alpha.value();
  const Transform c{a, 1.0 / a, std::cos(a * std::numbers::pi / 2.0)};
  const PhiloxKey key = key_from_seed(spec.seed);
  for (std::size_t b = 0; b < out.size(); b += kDesignBlock) {
    fill_block(c, key, static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j_begin + b),
               out.data() + b);
  }
  const std::uint64_t end = std::min<std::uint64_t>(spec.m, j_begin + out.size());
  if (end > j_begin) g_entries.fetch_add(end - j_begin, std::memory_order_relaxed);
}

std::uint64_t design_entries_generated() { return g_entries.load(std::memory_order_relaxed); }

void reset_design_entry_counter() { g_entries.store(0, std::memory_order_relaxed); }

}  // namespace ccsketch
