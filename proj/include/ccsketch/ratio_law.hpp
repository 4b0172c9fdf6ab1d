#pragma once

// Distribution of the ratio statistic (S2/S1)^(alpha/(1-alpha)) for i.i.d.
// S1, S2 ~ S(alpha, 1, 1), and the quantities of the minimum estimator built
// on it: tail probability, the small-t constant C_alpha and the bias
// constant D_{M,alpha}.

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "ccsketch/alpha.hpp"
#include "ccsketch/quadrature.hpp"

namespace ccsketch {

/// q_alpha(u) = [sin(alpha u)]^(alpha/(1-alpha)) [sin u]^(-1/(1-alpha)) sin(u - alpha u).
/// Positive and nondecreasing on (0, pi); domain_error at the endpoints.
double q_fn(AlphaParam alpha, double u);

/// Same as q_fn with pi - u supplied separately, for u close to pi.
double q_fn(AlphaParam alpha, double u, double pi_minus_u);

/// F_alpha(t) = Pr((S2/S1)^(alpha/(1-alpha)) <= t).
///
/// Closed forms for alpha = 0.5 ((2/pi) atan sqrt t) and the zero limit
/// (t / (1 + t)); the double integral otherwise.
double ratio_cdf(AlphaParam alpha, double t, const QuadratureSettings& settings = {});

/// F_alpha(t) by the double integral, even where a closed form exists.
QuadratureResult ratio_cdf_quadrature(AlphaParam alpha, double t,
                                      const QuadratureSettings& settings = {});

/// 1 - F_alpha(t), evaluated as F_alpha(1/t) for t > 1 to avoid cancellation.
double ratio_survival(AlphaParam alpha, double t, const QuadratureSettings& settings = {});

/// Reusable evaluator of F_alpha for one alpha: caches q_alpha at the nodes
/// of every refinement level it has touched. Not thread-safe; make one per
/// thread.
class RatioLaw {
 public:
  explicit RatioLaw(AlphaParam alpha, QuadratureSettings settings = {});
  ~RatioLaw();
  RatioLaw(RatioLaw&&) noexcept;
  RatioLaw& operator=(RatioLaw&&) noexcept;

  AlphaParam alpha() const { return alpha_; }

  double cdf(double t);
  double survival(double t);
  QuadratureResult cdf_quadrature(double t);

 private:
  struct Level;
  const Level& level(int l);
  double cdf_at_level(double t, int l);

  AlphaParam alpha_;
  QuadratureSettings settings_;
  std::vector<std::unique_ptr<Level>> levels_;
};

/// C_alpha with F_alpha(t) = t^(1-alpha) / (C_alpha + o(1)) as t -> 0.
struct ConstantEstimate {
  double value;
  double spread;  // max - min of t^(1-alpha)/F_alpha(t) over the grid
};

/// Least-squares line through t^(1-alpha)/F_alpha(t) at t = 1e-3..1e-6,
/// extrapolated to t = 0. The zero limit returns exactly 1.
ConstantEstimate c_alpha(AlphaParam alpha, const QuadratureSettings& settings = {});

/// Pr(x_hat - x >= eps) = [1 - F_alpha((eps/theta_i)^(alpha/(1-alpha)))]^M; 0 when theta_i = 0.
double tail_prob(AlphaParam alpha, double eps, double theta_i, std::uint64_t m,
                 const QuadratureSettings& settings = {});

/// [1 - F_alpha(t)]^M for a precomputed threshold t.
double tail_prob_at_threshold(AlphaParam alpha, double t, std::uint64_t m,
                              const QuadratureSettings& settings = {});

/// D_{M,alpha} = integral_0^inf [1 - F_alpha(t^(alpha/(1-alpha)))]^M dt.
///
/// alpha = 0.5 uses the Bernoulli series; other alpha integrate numerically.
/// Finite only when alpha * M > 1; smaller M throws std::domain_error.
double bias_constant(std::uint64_t m, AlphaParam alpha, const QuadratureSettings& settings = {});

/// Series for D_{M,0.5}; requires M >= 3.
double bias_constant_half_series(std::uint64_t m);

/// Numeric path for D_{M,alpha}, usable at alpha = 0.5 as well.
QuadratureResult bias_constant_quadrature(std::uint64_t m, AlphaParam alpha,
                                          const QuadratureSettings& settings = {});

/// B_0 .. B_count, exact, with convention B_1 = -1/2.
class BernoulliTable {
 public:
  explicit BernoulliTable(int count);

  int size() const { return static_cast<int>(values_.size()); }
  double operator[](int n) const { return values_.at(n); }
  /// Numerator/denominator string, e.g. "5/66".
  const std::string& exact(int n) const { return exact_.at(n); }
  /// B_n / n!, kept finite where B_n itself would overflow.
  double scaled(int n) const { return scaled_.at(n); }

 private:
  std::vector<double> values_;
  std::vector<double> scaled_;
  std::vector<std::string> exact_;
};

BernoulliTable bernoulli_numbers(int count);

}  // namespace ccsketch
