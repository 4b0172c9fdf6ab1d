#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "ccsketch/alpha.hpp"

namespace ccsketch {

/// Seeded description of the M x N design matrix s_ij ~ S(alpha, 1, 1).
/// The matrix is never stored; every entry is regenerated from
/// (seed, i, j, alpha).
struct DesignSpec {
  std::uint64_t n;  // signal dimension
  std::uint64_t m;  // number of measurements
  AlphaParam alpha;
  std::uint64_t seed;

  void validate() const;
};

/// Nonnegative signal x.
class SignalVector {
 public:
  SignalVector() = default;
  explicit SignalVector(std::vector<double> values);
  static SignalVector zeros(std::size_t n) { return SignalVector(std::vector<double>(n, 0.0)); }

  std::size_t size() const { return values_.size(); }
  std::span<const double> values() const { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }
  std::size_t count_nonzero() const;

 private:
  std::vector<double> values_;
};

/// y = S^T x for a given design, updatable in place.
class MeasurementVector {
 public:
  explicit MeasurementVector(DesignSpec design);
  MeasurementVector(DesignSpec design, std::vector<double> values);

  const DesignSpec& design() const { return design_; }
  std::span<const double> values() const { return values_; }
  std::span<double> values() { return values_; }
  std::size_t size() const { return values_.size(); }

  friend bool operator==(const MeasurementVector&, const MeasurementVector&) = default;

 private:
  DesignSpec design_;
  std::vector<double> values_;
};

inline bool operator==(const DesignSpec& a, const DesignSpec& b) {
  return a.n == b.n && a.m == b.m && a.alpha == b.alpha && a.seed == b.seed;
}

/// Turnstile update x[index] += increment (0-based index).
struct StreamUpdate {
  std::uint64_t index;
  double increment;
};

/// Additive Gaussian measurement noise with variance n * sigma0^2.
struct NoiseSpec {
  double sigma0;
  std::uint64_t noise_seed;

  void validate() const {
    if (!(sigma0 >= 0.0)) throw std::invalid_argument("sigma0 must be nonnegative");
  }
};

/// s_ij, 0-based. Pure in (seed, i, j, alpha).
double design_entry(const DesignSpec& spec, std::uint64_t i, std::uint64_t j);

/// Batch of s_ij for j in [j_begin, j_begin + out.size()).
///
/// j_begin and out.size() must be multiples of kDesignBlock; values past
/// column m are well-defined but not part of the design. This is the only
/// producer of design entries, so every consumer sees identical bits.
void design_segment(const DesignSpec& spec, std::uint64_t i, std::uint64_t j_begin,
                    std::span<double> out);

inline constexpr std::size_t kDesignBlock = 8;

inline constexpr std::size_t padded_length(std::uint64_t m) {
  return static_cast<std::size_t>((m + kDesignBlock - 1) / kDesignBlock * kDesignBlock);
}

/// Number of in-range design entries generated since the last reset.
std::uint64_t design_entries_generated();
void reset_design_entry_counter();

/// Scalar implementations kept as the test reference for the kernels.
namespace reference {
double design_entry(const DesignSpec& spec, std::uint64_t i, std::uint64_t j);
}

/// y_j = sum_i x_i s_ij, accumulated in ascending i for every j. Zero
/// coordinates contribute nothing and are skipped.
MeasurementVector encode(const SignalVector& signal, const DesignSpec& spec);

/// y_j += increment * s_{index, j} for all j.
void stream_update(MeasurementVector& measurements, StreamUpdate update);

/// Applies updates in order. Consecutive updates to the same coordinate are
/// merged into one update carrying their sum (accumulated in stream order), so
/// a coordinate-sorted stream reproduces encode() of its net signal bit for bit.
void stream_updates(MeasurementVector& measurements, std::span<const StreamUpdate> updates);

/// y_j += n_j, n_j ~ N(0, n * sigma0^2) keyed by noise_seed.
void add_noise(MeasurementVector& measurements, const NoiseSpec& noise);

}  // namespace ccsketch
