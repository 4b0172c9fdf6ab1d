#include "ccsketch/ratio_law.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/multiprecision/cpp_int.hpp>

namespace ccsketch {

namespace {

constexpr double kPi = std::numbers::pi;

double closed_form_cdf(AlphaParam alpha, double t) {
  if (alpha.is_zero_limit()) return t / (1.0 + t);
  return 2.0 / kPi * std::atan(std::sqrt(t));
}

void require_threshold(double t) {
  if (!(t >= 0.0)) throw std::invalid_argument("ratio_cdf requires t >= 0");
}

}  // namespace

double q_fn(AlphaParam alpha, double u, double pi_minus_u) {
  if (!(u > 0.0 && pi_minus_u > 0.0)) throw std::domain_error("q_fn requires 0 < u < pi");
  if (alpha.is_zero_limit()) return 1.0;
  const double a = alpha.value();
  const double sin_u = u <= pi_minus_u ? std::sin(u) : std::sin(pi_minus_u);
  return std::pow(std::sin(a * u), a / (1.0 - a)) * std::pow(sin_u, -1.0 / (1.0 - a)) *
         std::sin(u - a * u);
}

double q_fn(AlphaParam alpha, double u) { return q_fn(alpha, u, kPi - u); }

struct RatioLaw::Level {
  std::vector<double> weight;  // rule weights divided by pi
  std::vector<double> q;
};

RatioLaw::RatioLaw(AlphaParam alpha, QuadratureSettings settings)
    : alpha_(alpha), settings_(settings) {
  settings_.validate();
}

RatioLaw::~RatioLaw() = default;
RatioLaw::RatioLaw(RatioLaw&&) noexcept = default;
RatioLaw& RatioLaw::operator=(RatioLaw&&) noexcept = default;

const RatioLaw::Level& RatioLaw::level(int l) {
  while (static_cast<int>(levels_.size()) <= l) {
    const GradedRule rule(kPi, static_cast<int>(levels_.size()));
    auto lv = std::make_unique<Level>();
    lv->weight.reserve(rule.nodes().size());
    lv->q.reserve(rule.nodes().size());
    for (const auto& node : rule.nodes()) {
      lv->weight.push_back(node.weight / kPi);
      lv->q.push_back(q_fn(alpha_, node.x, node.complement));
    }
    levels_.push_back(std::move(lv));
  }
  return *levels_[l];
}

// (1/pi^2) sum_a sum_b w_a w_b / (1 + q_b / (t q_a)), valid for 0 < t <= 1.
double RatioLaw::cdf_at_level(double t, int l) {
  const Level& lv = level(l);
  const std::size_t n = lv.q.size();
  const double* w = lv.weight.data();
  const double* q = lv.q.data();
  double outer = 0.0;
  for (std::size_t a = 0; a < n; ++a) {
    const double c = t * q[a];
    double inner = 0.0;
#pragma omp simd reduction(+ : inner)
    for (std::size_t b = 0; b < n; ++b) inner += w[b] / (c + q[b]);
    outer += w[a] * c * inner;
  }
  return outer;
}

QuadratureResult RatioLaw::cdf_quadrature(double t) {
  require_threshold(t);
  if (t == 0.0) return {0.0, 0.0, 0};
  if (std::isinf(t)) return {1.0, 0.0, 0};
  // F(t) + F(1/t) = 1, so only thresholds in (0, 1] are ever integrated.
  const bool flip = t > 1.0;
  const double s = flip ? 1.0 / t : t;
  auto result = refine_until_converged([&](int l) { return cdf_at_level(s, l); }, settings_,
                                       "ratio_cdf");
  if (flip) result.value = 1.0 - result.value;
  return result;
}

double RatioLaw::cdf(double t) {
  require_threshold(t);
  if (alpha_.is_zero_limit() || alpha_.is_half()) {
    return std::isinf(t) ? 1.0 : closed_form_cdf(alpha_, t);
  }
  return cdf_quadrature(t).value;
}

double RatioLaw::survival(double t) {
  require_threshold(t);
  if (t == 0.0) return 1.0;
  if (std::isinf(t)) return 0.0;
  if (t > 1.0) return cdf(1.0 / t);
  return 1.0 - cdf(t);
}

double ratio_cdf(AlphaParam alpha, double t, const QuadratureSettings& settings) {
  return RatioLaw(alpha, settings).cdf(t);
}

QuadratureResult ratio_cdf_quadrature(AlphaParam alpha, double t,
                                      const QuadratureSettings& settings) {
  return RatioLaw(alpha, settings).cdf_quadrature(t);
}

double ratio_survival(AlphaParam alpha, double t, const QuadratureSettings& settings) {
  return RatioLaw(alpha, settings).survival(t);
}

ConstantEstimate c_alpha(AlphaParam alpha, const QuadratureSettings& settings) {
  if (alpha.is_zero_limit()) return {1.0, 0.0};
  constexpr std::array<double, 4> grid = {1e-3, 1e-4, 1e-5, 1e-6};
  RatioLaw law(alpha, settings);
  std::array<double, 4> ratio{};
  for (std::size_t k = 0; k < grid.size(); ++k) {
    ratio[k] = std::pow(grid[k], 1.0 - alpha.value()) / law.cdf(grid[k]);
  }
  // Least squares ratio = c0 + c1 t; C_alpha is the intercept.
  double mean_t = 0.0, mean_r = 0.0;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    mean_t += grid[k];
    mean_r += ratio[k];
  }
  mean_t /= grid.size();
  mean_r /= grid.size();
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    sxy += (grid[k] - mean_t) * (ratio[k] - mean_r);
    sxx += (grid[k] - mean_t) * (grid[k] - mean_t);
  }
  const double slope = sxy / sxx;
  const auto [lo, hi] = std::minmax_element(ratio.begin(), ratio.end());
  return {mean_r - slope * mean_t, *hi - *lo};
}

double tail_prob_at_threshold(AlphaParam alpha, double t, std::uint64_t m,
                              const QuadratureSettings& settings) {
  if (m < 1) throw std::invalid_argument("tail_prob requires M >= 1");
  const double survival = ratio_survival(alpha, t, settings);
  return std::pow(survival, static_cast<double>(m));
}

double tail_prob(AlphaParam alpha, double eps, double theta_i, std::uint64_t m,
                 const QuadratureSettings& settings) {
  alpha.require_finite("tail_prob with a finite theta_i");
  if (!(eps > 0.0)) throw std::invalid_argument("tail_prob requires eps > 0");
  if (!(theta_i >= 0.0)) throw std::invalid_argument("tail_prob requires theta_i >= 0");
  if (m < 1) throw std::invalid_argument("tail_prob requires M >= 1");
  if (theta_i == 0.0) return 0.0;
  const double t = std::pow(eps / theta_i, alpha.ratio_exponent());
  return tail_prob_at_threshold(alpha, t, m, settings);
}

double bias_constant_half_series(std::uint64_t m) {
  if (m < 3) throw std::domain_error("the D_{M,0.5} series requires M >= 3");
  constexpr int kMaxTerms = 200;
  const double md = static_cast<double>(m);
  // Terms decay like 4^-j, so a short table almost always suffices.
  for (int terms : {40, kMaxTerms}) {
    const BernoulliTable table(2 * terms);
    double sum = 0.0;
    double pi_pow = 1.0;
    for (int j = 0; j < terms; ++j) {
      const double sign = (j % 2 == 0) ? 1.0 : -1.0;
      const double term = sign * pi_pow * table.scaled(2 * j) / (md + 2.0 * j - 2.0);
      sum += term;
      if (j > 0 && std::abs(term) < 1e-12 * std::abs(sum)) {
        return md * (md - 1.0) * 4.0 / (kPi * kPi) * sum - 1.0;
      }
      pi_pow *= kPi * kPi;
    }
  }
  throw ConvergenceError("D_{M,0.5} series did not converge within 200 terms");
}

QuadratureResult bias_constant_quadrature(std::uint64_t m, AlphaParam alpha,
                                          const QuadratureSettings& settings) {
  alpha.require_finite("bias_constant");
  if (!(alpha.value() * static_cast<double>(m) > 1.0)) {
    throw std::domain_error("D_{M,alpha} is finite only for alpha * M > 1");
  }
  const double k = alpha.ratio_exponent();
  const double power = 1.0 / k - 1.0;
  const double md = static_cast<double>(m);
  RatioLaw law(alpha, settings);

  // With T = t^k and T = (1 - v)/v:
  //   D = (1/k) integral_0^1 S(T)^M T^(1/k - 1) v^-2 dv,  S = 1 - F_alpha.
  auto integrand = [&](double v, double vc) {
    const double complement = vc < 0.0 ? 1.0 - v : vc;  // 1 - v
    if (v <= 0.0) return 0.0;
    if (complement <= 0.0) return power == 0.0 ? 1.0 / k : 0.0;
    const double big_t = complement / v;
    const double survival = law.survival(big_t);
    if (survival <= 0.0) return 0.0;
    const double log_value = md * std::log(survival) + power * std::log(big_t) - 2.0 * std::log(v);
    return std::exp(log_value) / k;
  };
  boost::math::quadrature::tanh_sinh<double> integrator;
  double error = 0.0;
  double l1 = 0.0;
  const double value = integrator.integrate(integrand, 0.0, 1.0, 1e-10, &error, &l1);
  if (!std::isfinite(value) || error > 1e-7 * std::max(std::abs(value), 1e-300)) {
    throw ConvergenceError("bias_constant quadrature did not converge (estimate " +
                           std::to_string(value) + ", error " + std::to_string(error) + ")");
  }
  return {value, error, 0};
}

double bias_constant(std::uint64_t m, AlphaParam alpha, const QuadratureSettings& settings) {
  alpha.require_finite("bias_constant");
  if (alpha.is_half()) return bias_constant_half_series(m);
  return bias_constant_quadrature(m, alpha, settings).value;
}

BernoulliTable::BernoulliTable(int count) {
  if (count < 1) throw std::invalid_argument("bernoulli_numbers requires count >= 1");
  using boost::multiprecision::cpp_int;
  using boost::multiprecision::cpp_rational;

  std::vector<cpp_rational> b(count + 1);
  b[0] = 1;
  for (int n = 1; n <= count; ++n) {
    // sum_{k=0}^{n} C(n+1, k) B_k = 0
    cpp_rational acc = 0;
    cpp_int binom = 1;  // C(n+1, 0)
    for (int k = 0; k < n; ++k) {
      if (!(k > 1 && k % 2 == 1)) acc += cpp_rational(binom) * b[k];
      binom = binom * (n + 1 - k) / (k + 1);
    }
    b[n] = (n > 1 && n % 2 == 1) ? cpp_rational(0) : cpp_rational(-acc / (n + 1));
  }

  values_.reserve(count + 1);
  scaled_.reserve(count + 1);
  exact_.reserve(count + 1);
  cpp_int factorial = 1;
  for (int n = 0; n <= count; ++n) {
    if (n > 0) factorial *= n;
    values_.push_back(b[n].convert_to<double>());
    scaled_.push_back(cpp_rational(b[n] / factorial).convert_to<double>());
    exact_.push_back(b[n].str());
  }
}

BernoulliTable bernoulli_numbers(int count) { return BernoulliTable(count); }

}  // namespace ccsketch
