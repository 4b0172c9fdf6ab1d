// End-to-end acceptance run. Prints one PASS/FAIL line per criterion and
// exits nonzero if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <numbers>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ccsketch/counter_rng.hpp"
#include "ccsketch/decoder.hpp"
#include "ccsketch/experiment.hpp"
#include "ccsketch/planner.hpp"
#include "ccsketch/ratio_law.hpp"
#include "ccsketch/sketch.hpp"
#include "ccsketch/stable.hpp"
#include "oracles.hpp"

using namespace ccsketch;

namespace {

constexpr double kPi = std::numbers::pi;

struct Outcome {
  bool pass;
  std::string detail;
};

std::string fmt(const char* format, auto... args) {
  char buffer[512];
  std::snprintf(buffer, sizeof buffer, format, args...);
  return buffer;
}

std::vector<double> unit_grid(int points) {
  std::vector<double> t;
  for (int k = 0; k < points; ++k) t.push_back(static_cast<double>(k) / (points - 1));
  return t;
}

Outcome closed_form_agreement() {
  double worst = 0.0;
  for (double t : unit_grid(50)) {
    const double quad = ratio_cdf_quadrature(AlphaParam(0.5), t).value;
    worst = std::max(worst, std::abs(quad - 2.0 / kPi * std::atan(std::sqrt(t))));
  }
  return {worst < 1e-6, fmt("max |quadrature - (2/pi) atan sqrt t| = %.3g over 50 points", worst)};
}

Outcome sandwich_bounds() {
  const std::vector<double> alphas = {0.1, 0.2, 0.3, 0.4};
  double worst_lower = -INFINITY, worst_upper = -INFINITY, worst_order = -INFINITY;
  for (double t : unit_grid(50)) {
    const double lower = t / (1.0 + t);
    const double upper = 2.0 / kPi * std::atan(std::sqrt(t));
    double previous = -INFINITY;
    for (double a : alphas) {
      const double f = ratio_cdf(AlphaParam(a), t);
      worst_lower = std::max(worst_lower, lower - f);
      worst_upper = std::max(worst_upper, f - upper);
      worst_order = std::max(worst_order, previous - f);
      previous = f;
    }
  }
  // Monotonicity in alpha is checked up to quadrature accuracy; at t = 0 and
  // t = 1 all curves meet exactly (0 and 1/2).
  const bool pass = worst_lower <= 1e-6 && worst_upper <= 1e-6 && worst_order <= 1e-12;
  return {pass, fmt("max violation: lower %.3g, upper %.3g, alpha order %.3g", worst_lower,
                    worst_upper, worst_order)};
}

Outcome constants() {
  const double half = c_alpha(AlphaParam(0.5)).value;
  bool pass = std::abs(half - kPi / 2.0) <= 1e-3;
  std::string detail = fmt("C(0.5) = %.8f", half);
  for (double a : {0.1, 0.25, 0.4}) {
    const double c = c_alpha(AlphaParam(a)).value;
    pass &= c >= 0.95 && c <= kPi / 2.0 + 0.05;
    detail += fmt(", C(%.2g) = %.6f", a, c);
  }
  return {pass, detail};
}

Outcome bias_constant_cross_check() {
  double worst = 0.0;
  std::string detail;
  for (int m : {10, 50, 200}) {
    const double series = bias_constant_half_series(static_cast<std::uint64_t>(m));
    const double direct = oracle::bias_half_integral(m);
    worst = std::max(worst, std::abs(series - direct));
    detail += fmt("D(%d) = %.10g vs %.10g; ", m, series, direct);
  }
  return {worst < 1e-6, detail + fmt("max diff %.3g", worst)};
}

std::vector<double> stable_draws(AlphaParam alpha, std::uint64_t seed, std::uint32_t stream,
                                 std::uint32_t count) {
  std::vector<double> out(count);
  for (std::uint32_t k = 0; k < count; ++k) {
    out[k] = sample_skewed_stable(alpha, uniform_exp_from_words(counter_words(seed, Domain::design, stream, k)));
  }
  return out;
}

Outcome sampler_fidelity() {
  bool pass = true;
  std::string detail;
  for (double a : {0.1, 0.5}) {
    const AlphaParam alpha(a);
    const auto samples = stable_draws(alpha, 505, 0, 100000);
    // Bracketed between order statistics, so this bounds the exact KS distance from above.
    const double d = oracle::ks_one_sample_bound(samples, [&](double s) { return stable_cdf(alpha, s); }, 5);
    pass &= d < 0.01;
    detail += fmt("KS(%.1f) <= %.4f; ", a, d);
  }
  for (double a : {0.1, 0.5}) {
    const AlphaParam alpha(a);
    const auto s1 = stable_draws(alpha, 606, 1, 100000);
    const auto s2 = stable_draws(alpha, 606, 2, 100000);
    const auto s3 = stable_draws(alpha, 606, 3, 100000);
    const double c1 = 2.0, c2 = 0.5;
    const double scale = std::pow(std::pow(c1, a) + std::pow(c2, a), 1.0 / a);
    std::vector<double> mixed(s1.size()), single(s1.size());
    for (std::size_t k = 0; k < s1.size(); ++k) {
      mixed[k] = c1 * s1[k] + c2 * s2[k];
      single[k] = scale * s3[k];
    }
    const double d = oracle::ks_two_sample(mixed, single);
    pass &= d < 0.02;
    detail += fmt("scaling KS(%.1f) = %.4f; ", a, d);
  }
  return {pass, detail};
}

Outcome tail_law_match() {
  struct Setting {
    double ratio;  // eps / theta_i
    std::uint64_t m;
  };
  bool pass = true;
  std::string detail;
  // Two unit spikes at alpha = 0.5: theta_i = 1 for either coordinate.
  const SignalVector x(std::vector<double>{1.0, 1.0});
  for (const Setting s : {Setting{0.1, 10}, Setting{0.01, 50}}) {
    const double closed = std::pow(1.0 - 2.0 / kPi * std::atan(std::sqrt(s.ratio)), static_cast<double>(s.m));
    const std::uint64_t trials = 10000;
    std::uint64_t hits = 0;
    for (std::uint64_t t = 0; t < trials; ++t) {
      const DesignSpec design{2, s.m, AlphaParam(0.5), trial_design_seed(1729, t)};
      hits += min_ratio_estimate(encode(x, design), 0) - 1.0 >= s.ratio ? 1 : 0;
    }
    const double p = static_cast<double>(hits) / trials;
    const double se = oracle::binomial_se(closed, trials);
    const double library = tail_prob(AlphaParam(0.5), s.ratio, 1.0, s.m);
    pass &= std::abs(p - closed) <= 3.0 * se && std::abs(library - closed) <= 1e-12;
    detail += fmt("(eps/theta_i=%g, M=%llu): empirical %.4f, closed form %.4f, %.2f SE; ", s.ratio,
                  static_cast<unsigned long long>(s.m), p, closed, std::abs(p - closed) / se);
  }
  return {pass, detail};
}

struct Cached {
  std::optional<std::vector<RecoveryRow>> fig3, fig5;
  std::optional<std::vector<BiasRow>> fig7;
};

std::vector<AlphaParam> grid_up_to(double top) {
  std::vector<AlphaParam> out;
  for (const auto& a : ExperimentConfig::default_alpha_grid()) {
    if (a.value() <= top + 1e-12) out.push_back(a);
  }
  return out;
}

const std::vector<RecoveryRow>& fig3_rows(Cached& cache) {
  if (!cache.fig3) {
    ExperimentConfig c;
    c.alpha_grid = grid_up_to(0.30);
    cache.fig3 = run_recovery_experiment(c);
  }
  return *cache.fig3;
}

const std::vector<RecoveryRow>& fig5_rows(Cached& cache) {
  if (!cache.fig5) {
    ExperimentConfig c;
    c.m_rule = MRule::factor_1_6;
    cache.fig5 = run_recovery_experiment(c);
  }
  return *cache.fig5;
}

const std::vector<BiasRow>& fig7_rows(Cached& cache) {
  if (!cache.fig7) {
    ExperimentConfig c;
    c.m_rule = MRule::factor_1_6;
    c.trials = 100;
    c.n_list = {10000, 100000};
    cache.fig7 = run_bias_experiment(c);
  }
  return *cache.fig7;
}

Outcome fig3_replication(Cached& cache) {
  const auto& rows = fig3_rows(cache);
  bool pass = !rows.empty();
  double worst_error = 0.0, worst_rate = 1.0;
  std::set<std::uint64_t> ms;
  for (const auto& r : rows) {
    pass &= r.status == "ok" && r.median_error < 0.01 && r.support_rate >= 0.95;
    worst_error = std::max(worst_error, r.median_error);
    worst_rate = std::min(worst_rate, r.support_rate);
    ms.insert(r.m);
    if (r.status != "ok" || r.median_error >= 0.01 || r.support_rate < 0.95) {
      std::fprintf(stderr, "  criterion 7: alpha %.2f error %.4g support %.2f %s\n", r.alpha,
                   r.median_error, r.support_rate, r.status.c_str());
    }
  }
  pass &= ms == std::set<std::uint64_t>{162};
  return {pass, fmt("%zu alphas, M = %llu, worst median error %.4g, worst support rate %.2f",
                    rows.size(), static_cast<unsigned long long>(*ms.begin()), worst_error, worst_rate)};
}

Outcome fig5_replication(Cached& cache) {
  const auto& rows = fig5_rows(cache);
  bool pass = !rows.empty();
  double worst = 0.0;
  std::set<std::uint64_t> ms;
  for (const auto& r : rows) {
    pass &= r.status == "ok" && r.median_error <= 0.02;
    worst = std::max(worst, r.median_error);
    ms.insert(r.m);
    if (r.status != "ok" || r.median_error > 0.02) {
      std::fprintf(stderr, "  criterion 8: alpha %.2f error %.4g %s\n", r.alpha, r.median_error,
                   r.status.c_str());
    }
  }
  pass &= ms == std::set<std::uint64_t>{258};
  return {pass, fmt("%zu alphas up to 0.5, M = %llu, worst median error %.4g", rows.size(),
                    static_cast<unsigned long long>(*ms.begin()), worst)};
}

Outcome bias_improvement(Cached& cache) {
  const auto& rows = fig7_rows(cache);
  bool pass = rows.size() == 2;
  std::string detail;
  for (const auto& r : rows) {
    pass &= r.status == "ok" && r.median_error_corrected < r.median_error_uncorrected;
    detail += fmt("N=%llu M=%llu: %.5g -> %.5g; ", static_cast<unsigned long long>(r.n),
                  static_cast<unsigned long long>(r.m), r.median_error_uncorrected,
                  r.median_error_corrected);
  }
  return {pass, detail};
}

Outcome noise_robustness() {
  ExperimentConfig c;
  c.alpha_grid = {AlphaParam(0.05), AlphaParam(0.2)};
  c.sigma0 = 0.1;
  const auto rows = run_noise_experiment(c);
  bool pass = rows.size() == 2;
  std::string detail;
  for (const auto& r : rows) {
    pass &= r.status == "ok" && r.support_rate >= 0.95;
    detail += fmt("alpha %.2f: support %.2f, median error %.4g; ", r.alpha, r.support_rate, r.median_error);
  }
  return {pass, detail};
}

Outcome stream_batch_equality() {
  const std::uint64_t n = 5000;
  const DesignSpec design{n, 128, AlphaParam(0.2), 4242};
  auto updates = generate_turnstile_stream(n, 10000, 31337);
  std::stable_sort(updates.begin(), updates.end(),
                   [](const StreamUpdate& a, const StreamUpdate& b) { return a.index < b.index; });
  MeasurementVector streamed(design);
  stream_updates(streamed, updates);
  const auto batch = encode(net_signal(n, updates), design);
  const bool same = std::memcmp(streamed.values().data(), batch.values().data(),
                                batch.size() * sizeof(double)) == 0;
  std::size_t differing = 0;
  for (std::size_t j = 0; j < batch.size(); ++j) {
    differing += std::memcmp(&streamed.values()[j], &batch.values()[j], sizeof(double)) != 0;
  }
  return {same, fmt("10000 updates over N=%llu, M=128: %zu of 128 measurements differ",
                    static_cast<unsigned long long>(n), differing)};
}

Outcome overestimation(Cached& cache) {
  std::uint64_t violations = 0, rows = 0;
  for (const auto& r : fig3_rows(cache)) violations += r.overestimate_violations, ++rows;
  for (const auto& r : fig5_rows(cache)) violations += r.overestimate_violations, ++rows;
  for (const auto& r : fig7_rows(cache)) violations += r.overestimate_violations, ++rows;
  return {violations == 0, fmt("%llu coordinates with x_hat < x across %llu rows",
                               static_cast<unsigned long long>(violations),
                               static_cast<unsigned long long>(rows))};
}

Outcome planner_round_trip() {
  std::mt19937_64 rng(20110101);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto log_uniform = [&](double lo, double hi) { return lo * std::pow(hi / lo, unit(rng)); };
  bool pass = true;
  int worst_gap = 0;
  double worst_ratio = 0.0;
  for (int q = 0; q < 20; ++q) {
    const auto n = static_cast<std::uint64_t>(log_uniform(10.0, 1e7));
    const double delta = log_uniform(1e-4, 0.5);
    const double theta = log_uniform(4.0, 1000.0);
    const double alpha = 0.05 + 0.45 * unit(rng);
    const PlannerQuery query{n, delta, AlphaParam(alpha), 1.0, Theta{theta}};
    const auto m = measurements_exact(query);
    const bool ok = union_bound_check(m, query) <= delta && (m == 1 || union_bound_check(m - 1, query) > delta);
    pass &= ok;
    worst_ratio = std::max(worst_ratio, union_bound_check(m, query) / delta);
    if (!ok) {
      std::fprintf(stderr, "  criterion 13: n=%llu delta=%g theta=%g alpha=%g M=%llu\n",
                   static_cast<unsigned long long>(n), delta, theta, alpha,
                   static_cast<unsigned long long>(m));
    }
    const PlannerQuery half{n, delta, AlphaParam(0.5), 1.0, Theta{theta}};
    const int gap = std::abs(static_cast<int>(measurements_order(half)) - static_cast<int>(measurements_half(half)));
    worst_gap = std::max(worst_gap, gap);
    pass &= gap <= 1;
  }
  return {pass, fmt("20 queries: max failure/delta at M %.4f, max |order - half| at alpha 0.5 = %d",
                    worst_ratio, worst_gap)};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ccsketch acceptance run"};
  std::vector<int> only;
  app.add_option("--only", only, "criterion numbers to run (default: all)")->delimiter(',');
  CLI11_PARSE(app, argc, argv);

  Cached cache;
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"closed-form F_0.5 agreement", closed_form_agreement},
      {"sandwich bounds and alpha monotonicity", sandwich_bounds},
      {"C_alpha constants", constants},
      {"bias constant series vs quadrature", bias_constant_cross_check},
      {"sampler fidelity", sampler_fidelity},
      {"tail-law match", tail_law_match},
      {"recovery at M = K ln(N/delta)", [&] { return fig3_replication(cache); }},
      {"recovery at M = 1.6 K ln(N/delta)", [&] { return fig5_replication(cache); }},
      {"bias-correction improvement", [&] { return bias_improvement(cache); }},
      {"noise robustness", noise_robustness},
      {"stream/batch bit equality", stream_batch_equality},
      {"overestimation invariant", [&] { return overestimation(cache); }},
      {"planner round trip", planner_round_trip},
  };

  int failures = 0;
  for (std::size_t c = 0; c < criteria.size(); ++c) {
    const int number = static_cast<int>(c + 1);
    if (!only.empty() && std::find(only.begin(), only.end(), number) == only.end()) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome outcome;
    try {
      outcome = criteria[c].second();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    failures += outcome.pass ? 0 : 1;
    std::printf("%s criterion %2d: %s [%.1f s] %s\n", outcome.pass ? "PASS" : "FAIL", number,
                criteria[c].first.c_str(), seconds, outcome.detail.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
