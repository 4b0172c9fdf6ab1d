#pragma once

// Number of measurements M needed so that sum_i Pr(x_hat_i - x_i >= eps) <= delta.
//
// Each bound comes in two forms: *_bound returns the real-valued right-hand
// side, measurements_* its ceiling (at least 1).

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "ccsketch/alpha.hpp"
#include "ccsketch/quadrature.hpp"

namespace ccsketch {

/// theta given directly.
struct Theta {
  double value;
};

/// K unit spikes: theta^alpha = K for every alpha, which also gives the
/// alpha -> 0 limit a meaning ((eps/theta)^alpha -> 1/K at eps = 1).
struct UnitSpikes {
  std::uint64_t k;
};

struct PlannerQuery {
  std::uint64_t n;
  double delta;
  AlphaParam alpha;
  double eps;
  std::variant<Theta, UnitSpikes> scale;

  void validate() const;

  /// log(N / delta), natural log.
  double log_n_over_delta() const;
  /// (eps / theta)^alpha.
  double eps_over_theta_pow_alpha() const;
  /// (eps / theta)^(alpha / (1 - alpha)), the argument of F_alpha.
  double threshold() const;
};

double measurements_exact_bound(const PlannerQuery& q, const QuadratureSettings& s = {});
double measurements_convenient_bound(const PlannerQuery& q);
double measurements_order_bound(const PlannerQuery& q, const QuadratureSettings& s = {});
double measurements_half_bound(const PlannerQuery& q);

/// Smallest M with union_bound_check(M) <= delta.
std::uint64_t measurements_exact(const PlannerQuery& q, const QuadratureSettings& s = {});
/// Conservative except as alpha -> 0; requires eps/theta <= 1.
std::uint64_t measurements_convenient(const PlannerQuery& q);
/// C_alpha (theta/eps)^alpha log(N/delta); requires eps/theta < alpha.
std::uint64_t measurements_order(const PlannerQuery& q, const QuadratureSettings& s = {});
/// (pi/2) sqrt(theta/eps) log(N/delta); alpha = 0.5 and eps/theta < 1.
std::uint64_t measurements_half(const PlannerQuery& q);

/// N [1 - F_alpha((eps/theta)^(alpha/(1-alpha)))]^M, worst case theta_i = theta.
double union_bound_check(std::uint64_t m, const PlannerQuery& q, const QuadratureSettings& s = {});

enum class PlannerPath { exact, convenient, order, half };

std::string to_string(PlannerPath path);

struct PlanRow {
  PlannerPath path;
  bool applicable;
  std::uint64_t m;        // 0 when not applicable
  double bound;           // real-valued right-hand side
  double failure_bound;   // union_bound_check(m)
  std::string note;       // why a path does not apply
};

/// Every path, marking those whose preconditions fail.
std::vector<PlanRow> plan_all(const PlannerQuery& q, const QuadratureSettings& s = {});

}  // namespace ccsketch
