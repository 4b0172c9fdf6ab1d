#pragma once

#include <cmath>
#include <stdexcept>

#include "ccsketch/alpha.hpp"
#include "ccsketch/counter_rng.hpp"
#include "ccsketch/quadrature.hpp"

namespace ccsketch {

/// (u, w) input of the Chambers–Mallows–Stuck transform: u uniform on
/// (0, pi), w unit-mean exponential.
struct UniformExpPair {
  double u;
  double w;

  static UniformExpPair checked(double u, double w) {
    if (!(u > 0.0 && u < std::numbers::pi) || !(w > 0.0)) {
      throw std::domain_error("UniformExpPair requires 0 < u < pi and w > 0");
    }
    return {u, w};
  }
};

/// Maps two random words to a draw with u clamped to [eta, pi - eta].
inline UniformExpPair uniform_exp_from_words(WordPair words) {
  return {angle_from_word(words.first), -std::log(unit_open(words.second))};
}

/// CMS sample from S(alpha, 1, 1):
///   sin(alpha u) / [sin u cos(alpha pi / 2)]^(1/alpha) * [sin(u - alpha u) / w]^((1-alpha)/alpha).
/// Throws std::domain_error when sin u == 0 or w <= 0.
double sample_skewed_stable(AlphaParam alpha, UniformExpPair draw);

/// CDF of S(alpha, 1, 1), (1/pi) * integral_0^pi exp(-q(u) c^(-1/(1-alpha)) s^(-alpha/(1-alpha))) du
/// with c = cos(alpha pi / 2). Requires s > 0; s = +inf returns 1.
double stable_cdf(AlphaParam alpha, double s, const QuadratureSettings& settings = {});

/// Domain-of-attraction substitute U^(-1/alpha); 0 < uniform <= 1.
double sample_heavy_tail_approx(AlphaParam alpha, double uniform);

/// -sqrt(2) cos(u) sqrt(w), a standard normal when (u, w) is a CMS draw.
inline double shared_gaussian(UniformExpPair draw) {
  return -std::numbers::sqrt2 * std::cos(draw.u) * std::sqrt(draw.w);
}

}  // namespace ccsketch
