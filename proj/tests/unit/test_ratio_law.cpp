#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "ccsketch/counter_rng.hpp"
#include "ccsketch/ratio_law.hpp"
#include "ccsketch/stable.hpp"
#include "oracles.hpp"

using namespace ccsketch;

namespace {

constexpr double kPi = std::numbers::pi;

double atan_form(double t) { return 2.0 / kPi * std::atan(std::sqrt(t)); }

double draw(AlphaParam alpha, std::uint64_t seed, std::uint32_t a, std::uint32_t b) {
  return sample_skewed_stable(alpha, uniform_exp_from_words(counter_words(seed, Domain::design, a, b)));
}

// Frequency of min_j S2_j / S1_j >= r over `trials` groups of m pairs.
double exceedance(AlphaParam alpha, double r, std::uint32_t m, std::uint32_t trials) {
  std::uint32_t hits = 0;
  for (std::uint32_t k = 0; k < trials; ++k) {
    double best = std::numeric_limits<double>::infinity();
    for (std::uint32_t j = 0; j < m; ++j) {
      best = std::min(best, draw(alpha, 99, k, 2 * j + 1) / draw(alpha, 99, k, 2 * j));
    }
    hits += best >= r ? 1 : 0;
  }
  return static_cast<double>(hits) / trials;
}

}  // namespace

TEST(QFn, HalfClosedForm) {
  const AlphaParam half(0.5);
  EXPECT_NEAR(q_fn(half, kPi / 2), 0.5, 1e-15);
  EXPECT_NEAR(q_fn(half, 1e-9), 0.25, 1e-12);
  for (double u : {0.2, 1.0, 2.5, 3.1}) {
    EXPECT_NEAR(q_fn(half, u), 1.0 / (4.0 * std::pow(std::cos(u / 2), 2)), 1e-12 * q_fn(half, u));
  }
}

TEST(QFn, LimitAtZeroAndMonotone) {
  for (double a : {0.1, 0.25, 0.4}) {
    const AlphaParam alpha(a);
    EXPECT_NEAR(q_fn(alpha, 1e-10), std::pow(a, a / (1 - a)) * (1 - a), 1e-8);
    double previous = 0.0;
    for (double u = 1e-6; u < kPi; u += 0.01) {
      const double q = q_fn(alpha, u);
      EXPECT_GT(q, 0.0);
      EXPECT_GE(q, previous * (1 - 1e-14));
      previous = q;
    }
  }
  EXPECT_THROW(q_fn(AlphaParam(0.3), 0.0), std::domain_error);
  EXPECT_THROW(q_fn(AlphaParam(0.3), kPi), std::domain_error);
}

TEST(QFn, ComplementFormKeepsPrecisionNearPi) {
  const AlphaParam alpha(0.3);
  const double gap = 1e-12;
  const double expected = oracle::q_direct(0.3, kPi - 1e-3) * std::pow(1e-3 / gap, 1.0 / 0.7);
  EXPECT_NEAR(q_fn(alpha, kPi - gap, gap) / expected, 1.0, 1e-3);
}

TEST(RatioCdf, ClosedFormsAndEndpoints) {
  EXPECT_DOUBLE_EQ(ratio_cdf(AlphaParam(0.5), 1.0), 0.5);
  EXPECT_DOUBLE_EQ(ratio_cdf(AlphaParam::zero_limit(), 1.0), 0.5);
  EXPECT_DOUBLE_EQ(ratio_cdf(AlphaParam::zero_limit(), 0.25), 0.2);
  for (double a : {0.1, 0.3, 0.5}) EXPECT_EQ(ratio_cdf(AlphaParam(a), 0.0), 0.0);
  EXPECT_EQ(ratio_cdf(AlphaParam(0.3), std::numeric_limits<double>::infinity()), 1.0);
  EXPECT_THROW(ratio_cdf(AlphaParam(0.3), -1.0), std::invalid_argument);
}

TEST(RatioCdf, QuadratureReproducesHalfClosedForm) {
  for (double t : {1e-8, 1e-4, 0.01, 0.2, 0.7, 1.0, 3.0, 1e3}) {
    EXPECT_NEAR(ratio_cdf_quadrature(AlphaParam(0.5), t).value, atan_form(t), 1e-9) << t;
  }
}

TEST(RatioCdf, AgreesWithNestedAdaptiveIntegral) {
  for (double a : {0.1, 0.25, 0.4}) {
    for (double t : {0.05, 0.5}) {
      EXPECT_NEAR(ratio_cdf(AlphaParam(a), t), oracle::ratio_cdf_nested(a, t), 1e-7)
          << a << ' ' << t;
    }
  }
}

TEST(RatioCdf, MatchesMonteCarloRatio) {
  const AlphaParam alpha(0.25);
  const double t = 0.1;
  const std::uint32_t n = 1000000;
  std::uint32_t hits = 0;
  for (std::uint32_t k = 0; k < n; ++k) {
    const double r = draw(alpha, 7, 0, 2 * k + 1) / draw(alpha, 7, 0, 2 * k);
    hits += std::pow(r, alpha.ratio_exponent()) <= t ? 1 : 0;
  }
  const double p = ratio_cdf(alpha, t);
  EXPECT_NEAR(static_cast<double>(hits) / n, p, 3 * oracle::binomial_se(p, n));
}

TEST(RatioCdf, SymmetryAboutOne) {
  for (double a : {0.1, 0.3, 0.45}) {
    EXPECT_NEAR(ratio_cdf_quadrature(AlphaParam(a), 1.0).value, 0.5, 1e-6);
    for (double t : {0.01, 0.3}) {
      EXPECT_NEAR(ratio_cdf(AlphaParam(a), t) + ratio_cdf(AlphaParam(a), 1.0 / t), 1.0, 1e-9);
    }
  }
}

TEST(RatioCdf, SandwichedBetweenLimitsAndIncreasingInAlpha) {
  const std::vector<double> alphas = {0.1, 0.2, 0.3, 0.4, 0.5};
  for (int g = 0; g < 12; ++g) {
    const double t = g == 0 ? 0.0 : std::pow(10.0, -5.0 + 5.0 * g / 11.0);
    double previous = -1.0;
    for (double a : alphas) {
      const double f = ratio_cdf(AlphaParam(a), t);
      EXPECT_GE(f, t / (1 + t) - 1e-6) << a << ' ' << t;
      EXPECT_LE(f, atan_form(t) + 1e-6) << a << ' ' << t;
      EXPECT_GE(f, previous - 1e-9) << a << ' ' << t;
      previous = f;
    }
  }
}

TEST(RatioCdf, SmallThresholdPowerLaw) {
  for (double a : {0.1, 0.3, 0.5}) {
    std::vector<double> ratios;
    for (double t : {1e-4, 1e-5, 1e-6}) ratios.push_back(std::pow(t, 1 - a) / ratio_cdf(AlphaParam(a), t));
    const auto [lo, hi] = std::minmax_element(ratios.begin(), ratios.end());
    EXPECT_LT((*hi - *lo) / *lo, 0.05) << a;
  }
}

TEST(RatioCdf, ReportsConvergenceFailure) {
  EXPECT_THROW(ratio_cdf(AlphaParam(0.3), 0.37, {1e-300, 1}), ConvergenceError);
}

TEST(CAlpha, EndpointsAndRange) {
  EXPECT_EQ(c_alpha(AlphaParam::zero_limit()).value, 1.0);
  EXPECT_NEAR(c_alpha(AlphaParam(0.5)).value, kPi / 2, 1e-3);
  double previous = 1.0;
  for (double a : {0.1, 0.25, 0.4}) {
    const double c = c_alpha(AlphaParam(a)).value;
    EXPECT_GE(c, 1.0);
    EXPECT_LE(c, kPi / 2);
    EXPECT_GT(c, previous);
    previous = c;
  }
}

TEST(TailProb, HalfClosedForm) {
  const double eps = 0.3, theta = 2.0;
  EXPECT_NEAR(tail_prob(AlphaParam(0.5), eps, theta, 7),
              std::pow(1 - atan_form(eps / theta), 7), 1e-15);
  EXPECT_EQ(tail_prob(AlphaParam(0.3), 1.0, 0.0, 10), 0.0);
  EXPECT_THROW(tail_prob(AlphaParam(0.3), 0.0, 1.0, 10), std::invalid_argument);
  EXPECT_THROW(tail_prob(AlphaParam(0.3), 1.0, 1.0, 0), std::invalid_argument);
}

TEST(TailProb, Monotone) {
  const AlphaParam alpha(0.3);
  EXPECT_GE(tail_prob(alpha, 0.1, 1.0, 5), tail_prob(alpha, 0.1, 1.0, 6));
  EXPECT_GE(tail_prob(alpha, 0.1, 1.0, 5), tail_prob(alpha, 0.2, 1.0, 5));
  EXPECT_LE(tail_prob(alpha, 0.1, 1.0, 5), tail_prob(alpha, 0.1, 2.0, 5));
}

TEST(TailProb, MatchesSimulatedMinimum) {
  struct Case {
    double alpha, ratio;
    std::uint32_t m;
  };
  for (const Case c : {Case{0.3, 0.1, 50}, Case{0.3, 0.01, 10}, Case{0.1, 0.5, 5}}) {
    const AlphaParam alpha(c.alpha);
    const std::uint32_t trials = 10000;
    const double p = tail_prob(alpha, c.ratio, 1.0, c.m);
    const double freq = exceedance(alpha, c.ratio, c.m, trials);
    EXPECT_NEAR(freq, p, 3 * oracle::binomial_se(p, trials) + 1e-12)
        << c.alpha << ' ' << c.ratio << ' ' << c.m;
  }
}

TEST(BiasConstant, SeriesMatchesDirectIntegral) {
  for (int m : {3, 10, 50, 200}) {
    EXPECT_NEAR(bias_constant_half_series(m), oracle::bias_half_integral(m), 1e-9) << m;
  }
  EXPECT_NEAR(bias_constant_half_series(10), 0.0423906411, 1e-10);
}

TEST(BiasConstant, QuadraturePathAgreesAtHalf) {
  for (int m : {10, 50}) {
    EXPECT_NEAR(bias_constant_quadrature(m, AlphaParam(0.5)).value, bias_constant_half_series(m), 1e-8);
  }
}

TEST(BiasConstant, DecreasesInM) {
  for (double a : {0.3, 0.5}) {
    EXPECT_GT(bias_constant(10, AlphaParam(a)), bias_constant(50, AlphaParam(a)));
    EXPECT_GT(bias_constant(50, AlphaParam(a)), bias_constant(200, AlphaParam(a)));
  }
  EXPECT_LT(bias_constant(2000, AlphaParam(0.5)), 1e-5);
}

TEST(BiasConstant, RespectsBetaBound) {
  for (double a : {0.1, 0.3, 0.5}) {
    for (int m : {10, 50, 200}) {
      if (a * m <= 1.0) {
        EXPECT_THROW(bias_constant(m, AlphaParam(a)), std::domain_error);
        continue;
      }
      EXPECT_LE(bias_constant(m, AlphaParam(a)), oracle::bias_beta_bound(m, a) * (1 + 1e-9))
          << a << ' ' << m;
    }
  }
}

TEST(BiasConstant, RejectsTooFewMeasurements) {
  EXPECT_THROW(bias_constant_half_series(2), std::domain_error);
  EXPECT_THROW(bias_constant(1, AlphaParam(0.5)), std::domain_error);
}

TEST(Bernoulli, KnownValues) {
  const auto b = bernoulli_numbers(30);
  EXPECT_EQ(b.exact(0), "1");
  EXPECT_EQ(b.exact(1), "-1/2");
  EXPECT_EQ(b.exact(2), "1/6");
  EXPECT_EQ(b.exact(4), "-1/30");
  EXPECT_EQ(b.exact(10), "5/66");
  EXPECT_EQ(b.exact(12), "-691/2730");
  for (int n : {3, 5, 7, 29}) EXPECT_EQ(b[n], 0.0);
  EXPECT_DOUBLE_EQ(b[2], 1.0 / 6.0);
  EXPECT_NEAR(b.scaled(10), 5.0 / 66.0 / 3628800.0, 1e-25);
  EXPECT_THROW(bernoulli_numbers(0), std::invalid_argument);
}
