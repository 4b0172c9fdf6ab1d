#include "ccsketch/sketch.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <omp.h>

#include "ccsketch/counter_rng.hpp"
#include "ccsketch/stable.hpp"

namespace ccsketch {

void DesignSpec::validate() const {
  constexpr std::uint64_t kLimit = std::numeric_limits<std::uint32_t>::max();
  if (n < 1 || m < 1) throw std::invalid_argument("design needs n >= 1 and m >= 1");
  if (n > kLimit || m > kLimit) throw std::invalid_argument("design dimensions must fit in 32 bits");
  alpha.require_finite("a design matrix");
}

SignalVector::SignalVector(std::vector<double> values) : values_(std::move(values)) {
  for (double v : values_) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      throw std::invalid_argument("signal entries must be finite and nonnegative");
    }
  }
}

std::size_t SignalVector::count_nonzero() const {
  return static_cast<std::size_t>(std::count_if(values_.begin(), values_.end(),
                                                [](double v) { return v != 0.0; }));
}

MeasurementVector::MeasurementVector(DesignSpec design)
    : design_(design), values_(static_cast<std::size_t>(design.m), 0.0) {
  design_.validate();
}

MeasurementVector::MeasurementVector(DesignSpec design, std::vector<double> values)
    : design_(design), values_(std::move(values)) {
  design_.validate();
  if (values_.size() != design_.m) {
    throw std::invalid_argument("measurement count does not match the design");
  }
}

double design_entry(const DesignSpec& spec, std::uint64_t i, std::uint64_t j) {
  if (i >= spec.n || j >= spec.m) throw std::out_of_range("design entry index out of range");
  double block[kDesignBlock];
  const std::uint64_t j0 = j / kDesignBlock * kDesignBlock;
  design_segment(spec, i, j0, block);
  return block[j - j0];
}

namespace reference {

double design_entry(const DesignSpec& spec, std::uint64_t i, std::uint64_t j) {
  if (i >= spec.n || j >= spec.m) throw std::out_of_range("design entry index out of range");
  const auto words = counter_words(spec.seed, Domain::design, static_cast<std::uint32_t>(i),
                                   static_cast<std::uint32_t>(j));
  return sample_skewed_stable(spec.alpha, uniform_exp_from_words(words));
}

}  // namespace reference

MeasurementVector encode(const SignalVector& signal, const DesignSpec& spec) {
  spec.validate();
  if (signal.size() != spec.n) throw std::invalid_argument("signal length does not match design n");
  MeasurementVector out(spec);
  const auto x = signal.values();
  std::vector<std::uint64_t> support;
  for (std::uint64_t i = 0; i < spec.n; ++i) {
    if (x[i] != 0.0) support.push_back(i);
  }
  if (support.empty()) return out;

  const std::size_t blocks = padded_length(spec.m) / kDesignBlock;
  double* y = out.values().data();
  // Threads own disjoint column ranges; each y_j still sums in ascending i.
#pragma omp parallel
  {
    const auto threads = static_cast<std::size_t>(omp_get_num_threads());
    const auto tid = static_cast<std::size_t>(omp_get_thread_num());
    const std::size_t b0 = blocks * tid / threads;
    const std::size_t b1 = blocks * (tid + 1) / threads;
    if (b1 > b0) {
      const std::size_t j0 = b0 * kDesignBlock;
      const std::size_t j1 = std::min<std::size_t>(b1 * kDesignBlock, spec.m);
      std::vector<double> column((b1 - b0) * kDesignBlock);
      for (std::uint64_t i : support) {
        design_segment(spec, i, j0, column);
        const double xi = x[i];
        for (std::size_t j = j0; j < j1; ++j) y[j] += xi * column[j - j0];
      }
    }
  }
  return out;
}

void stream_update(MeasurementVector& measurements, StreamUpdate update) {
  const DesignSpec& spec = measurements.design();
  if (update.index >= spec.n) throw std::out_of_range("stream update index out of range");
  std::vector<double> column(padded_length(spec.m));
  design_segment(spec, update.index, 0, column);
  auto y = measurements.values();
  for (std::size_t j = 0; j < y.size(); ++j) y[j] += update.increment * column[j];
}

void stream_updates(MeasurementVector& measurements, std::span<const StreamUpdate> updates) {
  std::size_t k = 0;
  while (k < updates.size()) {
    // Runs of updates to one coordinate are summed first, in stream order.
    const std::uint64_t index = updates[k].index;
    if (index >= measurements.design().n) throw std::out_of_range("stream update index out of range");
    double net = 0.0;
    for (; k < updates.size() && updates[k].index == index; ++k) net += updates[k].increment;
    if (net != 0.0) stream_update(measurements, {index, net});
  }
}

void add_noise(MeasurementVector& measurements, const NoiseSpec& noise) {
  noise.validate();
  if (noise.sigma0 == 0.0) return;
  const double sigma = std::sqrt(static_cast<double>(measurements.design().n)) * noise.sigma0;
  auto y = measurements.values();
  for (std::size_t j = 0; j < y.size(); ++j) {
    const auto words = counter_words(noise.noise_seed, Domain::noise, static_cast<std::uint32_t>(j), 0u);
    y[j] += sigma * shared_gaussian(uniform_exp_from_words(words));
  }
}

}  // namespace ccsketch
