#include "ccsketch/decoder.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "ccsketch/ratio_law.hpp"

namespace ccsketch {

namespace {

double column_minimum(std::span<const double> y, const double* column) {
  double best = std::numeric_limits<double>::infinity();
#pragma omp simd reduction(min : best)
  for (std::size_t j = 0; j < y.size(); ++j) best = std::min(best, y[j] / column[j]);
  return best;
}

}  // namespace

AlphaNorm AlphaNorm::of(const SignalVector& signal, AlphaParam alpha) {
  alpha.require_finite("AlphaNorm");
  const double a = alpha.value();
  double sum = 0.0;
  for (double x : signal.values()) sum += std::pow(x, a);
  AlphaNorm norm{std::pow(sum, 1.0 / a), {}};
  norm.theta_i.reserve(signal.size());
  for (double x : signal.values()) {
    norm.theta_i.push_back(std::pow(std::max(sum - std::pow(x, a), 0.0), 1.0 / a));
  }
  return norm;
}

double min_ratio_estimate(const MeasurementVector& measurements, std::uint64_t i) {
  const DesignSpec& spec = measurements.design();
  if (i >= spec.n) throw std::out_of_range("coordinate index out of range");
  std::vector<double> column(padded_length(spec.m));
  design_segment(spec, i, 0, column);
  return column_minimum(measurements.values(), column.data());
}

RecoveryReport decode_all(const MeasurementVector& measurements) {
  const DesignSpec& spec = measurements.design();
  const auto y = measurements.values();
  const auto start = std::chrono::steady_clock::now();

  RecoveryReport report;
  report.raw_estimates.resize(spec.n);
  const auto n = static_cast<std::int64_t>(spec.n);
#pragma omp parallel
  {
    std::vector<double> column(padded_length(spec.m));
#pragma omp for schedule(static)
    for (std::int64_t i = 0; i < n; ++i) {
      design_segment(spec, static_cast<std::uint64_t>(i), 0, column);
      report.raw_estimates[i] = column_minimum(y, column.data());
    }
  }
  report.estimates.resize(spec.n);
  std::transform(report.raw_estimates.begin(), report.raw_estimates.end(),
                 report.estimates.begin(), [](double v) { return std::max(v, 0.0); });
  report.decode_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

namespace reference {

std::vector<double> decode_all(const MeasurementVector& measurements) {
  const DesignSpec& spec = measurements.design();
  const auto y = measurements.values();
  std::vector<double> out(spec.n);
  for (std::uint64_t i = 0; i < spec.n; ++i) {
    double best = std::numeric_limits<double>::infinity();
    for (std::uint64_t j = 0; j < spec.m; ++j) {
      const double ratio = y[j] / reference::design_entry(spec, i, j);
      if (ratio < best) best = ratio;
    }
    out[i] = best;
  }
  return out;
}

}  // namespace reference

double estimate_theta_half(const MeasurementVector& measurements) {
  if (!measurements.design().alpha.is_half()) {
    throw std::invalid_argument("estimate_theta_half requires alpha = 0.5");
  }
  double inverse_sum = 0.0;
  for (double y : measurements.values()) {
    if (!(y > 0.0)) throw std::domain_error("estimate_theta_half requires positive measurements");
    inverse_sum += 1.0 / y;
  }
  const double m = static_cast<double>(measurements.size());
  return (1.0 - 3.0 / (4.0 * m)) * std::sqrt(m / inverse_sum);
}

RecoveryReport bias_correct_half(RecoveryReport report, const MeasurementVector& measurements) {
  const double sqrt_theta = estimate_theta_half(measurements);
  const double d = bias_constant_half_series(measurements.design().m);
  std::vector<double> corrected(report.estimates.size());
  for (std::size_t i = 0; i < corrected.size(); ++i) {
    const double raw = report.raw_estimates.empty() ? report.estimates[i] : report.raw_estimates[i];
    if (raw < 0.0) {
      corrected[i] = report.estimates[i];
      continue;
    }
    const double gap = sqrt_theta - std::sqrt(raw);
    corrected[i] = std::max(raw - gap * gap * d, 0.0);
  }
  report.corrected_estimates = std::move(corrected);
  return report;
}

std::vector<std::uint64_t> top_k(std::span<const double> estimates, std::size_t k) {
  if (k < 1 || k > estimates.size()) throw std::out_of_range("top_k requires 1 <= k <= n");
  std::vector<std::uint64_t> order(estimates.size());
  std::iota(order.begin(), order.end(), std::uint64_t{0});
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k), order.end(),
                    [&](std::uint64_t a, std::uint64_t b) {
                      if (estimates[a] != estimates[b]) return estimates[a] > estimates[b];
                      return a < b;
                    });
  order.resize(k);
  return order;
}

std::vector<double> restrict_to_support(std::span<const double> estimates,
                                        std::span<const std::uint64_t> support) {
  std::vector<double> out(estimates.size(), 0.0);
  for (auto i : support) out.at(i) = estimates[i];
  return out;
}

double normalized_error(const SignalVector& truth, std::span<const double> estimates) {
  if (truth.size() != estimates.size()) throw std::invalid_argument("length mismatch");
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < estimates.size(); ++i) {
    const double diff = truth[i] - estimates[i];
    num += diff * diff;
    den += truth[i] * truth[i];
  }
  if (den == 0.0) throw std::domain_error("normalized_error is undefined for an all-zero truth");
  return std::sqrt(num / den);
}

}  // namespace ccsketch
