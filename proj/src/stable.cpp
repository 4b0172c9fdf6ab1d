#include "ccsketch/stable.hpp"

#include <cmath>
#include <numbers>

#include "ccsketch/ratio_law.hpp"

namespace ccsketch {

double sample_skewed_stable(AlphaParam alpha, UniformExpPair draw) {
  alpha.require_finite("sample_skewed_stable");
  const double a = alpha.value();
  const double u = draw.u;
  // pi - u is exact for u >= pi/2, which keeps sin u accurate near pi.
  const double sin_u = u <= 0.5 * std::numbers::pi ? std::sin(u) : std::sin(std::numbers::pi - u);
  if (!(sin_u > 0.0) || !(draw.w > 0.0)) {
    throw std::domain_error("sample_skewed_stable requires 0 < u < pi and w > 0");
  }
  const double scale = sin_u * std::cos(a * std::numbers::pi / 2.0);
  return std::sin(a * u) / std::pow(scale, 1.0 / a) *
         std::pow(std::sin(u - a * u) / draw.w, (1.0 - a) / a);
}

double stable_cdf(AlphaParam alpha, double s, const QuadratureSettings& settings) {
  alpha.require_finite("stable_cdf");
  if (!(s > 0.0)) throw std::invalid_argument("stable_cdf requires s > 0");
  if (std::isinf(s)) return 1.0;
  const double a = alpha.value();
  const double exponent = alpha.ratio_exponent();
  // Pr(S <= s) = Pr(w >= q(u) c^(-1/(1-a)) s^(-a/(1-a))), w ~ Exp(1).
  const double factor = std::pow(std::cos(a * std::numbers::pi / 2.0), -1.0 / (1.0 - a)) *
                        std::pow(s, -exponent);
  auto at_level = [&](int level) {
    const GradedRule rule(std::numbers::pi, level);
    double sum = 0.0;
    for (const auto& node : rule.nodes()) {
      sum += node.weight * std::exp(-factor * q_fn(alpha, node.x, node.complement));
    }
    return sum / std::numbers::pi;
  };
  return refine_until_converged(at_level, settings, "stable_cdf").value;
}

double sample_heavy_tail_approx(AlphaParam alpha, double uniform) {
  alpha.require_finite("sample_heavy_tail_approx");
  if (!(uniform > 0.0 && uniform <= 1.0)) {
    throw std::domain_error("sample_heavy_tail_approx requires 0 < U <= 1");
  }
  return std::pow(uniform, -1.0 / alpha.value());
}

}  // namespace ccsketch
