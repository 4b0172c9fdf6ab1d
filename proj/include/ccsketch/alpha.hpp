#pragma once

#include <stdexcept>
#include <string>

namespace ccsketch {

/// Stability index of the maximally-skewed stable law S(alpha, 1, 1).
///
/// Admissible values are 0 < alpha <= 0.5. The alpha -> 0 limit is not a
/// number in that interval, so it is carried as an explicit flag: only the
/// closed-form paths (ratio CDF, planner) accept it, samplers reject it.
class AlphaParam {
 public:
  explicit AlphaParam(double alpha) : value_(alpha) {
    if (!(alpha > 0.0 && alpha <= 0.5)) {
      throw std::invalid_argument("alpha must lie in (0, 0.5], got " + std::to_string(alpha));
    }
  }

  static AlphaParam zero_limit() { return AlphaParam(); }

  bool is_zero_limit() const { return zero_limit_; }
  bool is_half() const { return !zero_limit_ && value_ == 0.5; }

  /// 0 for the zero limit.
  double value() const { return value_; }

  /// alpha / (1 - alpha), the power linking S2/S1 to the ratio statistic.
  double ratio_exponent() const { return value_ / (1.0 - value_); }

  void require_finite(const char* what) const {
    if (zero_limit_) {
      throw std::invalid_argument(std::string(what) + " is undefined in the alpha -> 0 limit");
    }
  }

  friend bool operator==(const AlphaParam&, const AlphaParam&) = default;

 private:
  AlphaParam() : value_(0.0), zero_limit_(true) {}

  double value_;
  bool zero_limit_ = false;
};

}  // namespace ccsketch
