#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "ccsketch/alpha.hpp"
#include "ccsketch/quadrature.hpp"
#include "ccsketch/sketch.hpp"

namespace ccsketch {

/// theta = (sum_i x_i^alpha)^(1/alpha) and theta_i = (theta^alpha - x_i^alpha)^(1/alpha).
struct AlphaNorm {
  double theta;
  std::vector<double> theta_i;

  static AlphaNorm of(const SignalVector& signal, AlphaParam alpha);
};

struct RecoveryReport {
  /// Minimum-ratio estimates clamped at 0.
  std::vector<double> estimates;
  /// Unclamped minima; negative only under measurement noise.
  std::vector<double> raw_estimates;
  std::optional<std::vector<double>> corrected_estimates;
  /// 0-based indices, raw estimate descending, index ascending on ties.
  std::vector<std::uint64_t> support;
  std::optional<double> normalized_error;
  double decode_seconds = 0.0;
};

/// min_j y_j / s_ij, first minimum wins on ties.
double min_ratio_estimate(const MeasurementVector& measurements, std::uint64_t i);

/// One pass over the coordinates, each column regenerated once. Runs the
/// coordinate loop in parallel; results do not depend on the thread count.
RecoveryReport decode_all(const MeasurementVector& measurements);

namespace reference {
/// Serial decode on scalar reference entries, no clamping.
std::vector<double> decode_all(const MeasurementVector& measurements);
}  // namespace reference

/// (1 - 3/(4M)) sqrt(M / sum_j 1/y_j), the alpha = 0.5 estimate of sqrt(theta).
/// Throws std::domain_error on a nonpositive measurement.
double estimate_theta_half(const MeasurementVector& measurements);

/// x_c = x_hat - [sqrt_theta_hat - sqrt(x_hat)]^2 D_{M,0.5}, clamped at 0.
/// Coordinates with a negative raw estimate are left uncorrected.
RecoveryReport bias_correct_half(RecoveryReport report, const MeasurementVector& measurements);

/// k largest values, descending, ascending index on ties.
std::vector<std::uint64_t> top_k(std::span<const double> estimates, std::size_t k);

/// Keeps only `support` entries of `estimates`, zeroing the rest.
std::vector<double> restrict_to_support(std::span<const double> estimates,
                                        std::span<const std::uint64_t> support);

/// sqrt(sum (x_i - x_hat_i)^2 / sum x_i^2); rejects an all-zero truth.
double normalized_error(const SignalVector& truth, std::span<const double> estimates);

}  // namespace ccsketch
