#include "ccsketch/planner.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "ccsketch/ratio_law.hpp"

namespace ccsketch {

namespace {

std::uint64_t ceil_at_least_one(double bound) {
  if (!std::isfinite(bound)) throw std::domain_error("measurement bound is not finite");
  const double c = std::ceil(bound);
  return c < 1.0 ? 1 : static_cast<std::uint64_t>(c);
}

}  // namespace

void PlannerQuery::validate() const {
  if (n < 1) throw std::invalid_argument("planner needs N >= 1");
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("planner needs 0 < delta < 1");
  if (!(eps > 0.0)) throw std::invalid_argument("planner needs eps > 0");
  if (const auto* t = std::get_if<Theta>(&scale)) {
    if (!(t->value > 0.0)) throw std::invalid_argument("planner needs theta > 0");
    alpha.require_finite("a planner query with explicit theta");
  } else if (std::get<UnitSpikes>(scale).k < 1) {
    throw std::invalid_argument("planner needs K >= 1");
  }
}

double PlannerQuery::log_n_over_delta() const {
  return std::log(static_cast<double>(n)) - std::log(delta);
}

double PlannerQuery::eps_over_theta_pow_alpha() const {
  if (const auto* t = std::get_if<Theta>(&scale)) return std::pow(eps / t->value, alpha.value());
  const double k = static_cast<double>(std::get<UnitSpikes>(scale).k);
  return std::pow(eps, alpha.value()) / k;
}

double PlannerQuery::threshold() const {
  return std::pow(eps_over_theta_pow_alpha(), 1.0 / (1.0 - alpha.value()));
}

double measurements_exact_bound(const PlannerQuery& q, const QuadratureSettings& s) {
  q.validate();
  const double survival = ratio_survival(q.alpha, q.threshold(), s);
  if (survival <= 0.0) return 0.0;
  return q.log_n_over_delta() / -std::log(survival);
}

double measurements_convenient_bound(const PlannerQuery& q) {
  q.validate();
  if (!(q.eps_over_theta_pow_alpha() <= 1.0)) {
    throw std::domain_error("the convenient bound requires eps/theta <= 1");
  }
  return q.log_n_over_delta() / std::log1p(q.threshold());
}

double measurements_order_bound(const PlannerQuery& q, const QuadratureSettings& s) {
  q.validate();
  const double ratio = q.eps_over_theta_pow_alpha();
  const double limit = q.alpha.is_zero_limit() ? 1.0 : std::pow(q.alpha.value(), q.alpha.value());
  if (!(ratio < limit)) throw std::domain_error("the C_alpha bound requires eps/theta < alpha");
  return c_alpha(q.alpha, s).value / ratio * q.log_n_over_delta();
}

double measurements_half_bound(const PlannerQuery& q) {
  q.validate();
  if (!q.alpha.is_half()) throw std::domain_error("the closed-form bound requires alpha = 0.5");
  const double eps_over_theta = q.threshold();  // exponent is 1 at alpha = 0.5
  if (!(eps_over_theta < 1.0)) throw std::domain_error("the closed-form bound requires eps/theta < 1");
  return std::numbers::pi / 2.0 / std::sqrt(eps_over_theta) * q.log_n_over_delta();
}

double union_bound_check(std::uint64_t m, const PlannerQuery& q, const QuadratureSettings& s) {
  q.validate();
  return static_cast<double>(q.n) * tail_prob_at_threshold(q.alpha, q.threshold(), m, s);
}

std::uint64_t measurements_exact(const PlannerQuery& q, const QuadratureSettings& s) {
  std::uint64_t m = ceil_at_least_one(measurements_exact_bound(q, s));
  // Certify against the same tail evaluation the union bound uses, so the
  // round trip holds exactly rather than up to rounding of the division.
  const double n = static_cast<double>(q.n);
  const double survival = ratio_survival(q.alpha, q.threshold(), s);
  auto failure = [&](std::uint64_t mm) { return n * std::pow(survival, static_cast<double>(mm)); };
  while (failure(m) > q.delta) ++m;
  while (m > 1 && failure(m - 1) <= q.delta) --m;
  return m;
}

std::uint64_t measurements_convenient(const PlannerQuery& q) {
  return ceil_at_least_one(measurements_convenient_bound(q));
}

std::uint64_t measurements_order(const PlannerQuery& q, const QuadratureSettings& s) {
  return ceil_at_least_one(measurements_order_bound(q, s));
}

std::uint64_t measurements_half(const PlannerQuery& q) {
  return ceil_at_least_one(measurements_half_bound(q));
}

std::string to_string(PlannerPath path) {
  switch (path) {
    case PlannerPath::exact: return "exact";
    case PlannerPath::convenient: return "convenient";
    case PlannerPath::order: return "order";
    case PlannerPath::half: return "half";
  }
  return "unknown";
}

std::vector<PlanRow> plan_all(const PlannerQuery& q, const QuadratureSettings& s) {
  q.validate();
  std::vector<PlanRow> rows;
  auto add = [&](PlannerPath path, auto&& bound_fn) {
    PlanRow row{path, false, 0, 0.0, 0.0, {}};
    try {
      row.bound = bound_fn();
      row.m = ceil_at_least_one(row.bound);
      if (path == PlannerPath::exact) row.m = measurements_exact(q, s);
      row.failure_bound = union_bound_check(row.m, q, s);
      row.applicable = true;
    } catch (const std::domain_error& e) {
      row.note = e.what();
    }
    rows.push_back(std::move(row));
  };
  add(PlannerPath::exact, [&] { return measurements_exact_bound(q, s); });
  add(PlannerPath::convenient, [&] { return measurements_convenient_bound(q); });
  add(PlannerPath::order, [&] { return measurements_order_bound(q, s); });
  add(PlannerPath::half, [&] { return measurements_half_bound(q); });
  return rows;
}

}  // namespace ccsketch
