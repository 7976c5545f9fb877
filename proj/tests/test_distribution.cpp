#include "hrt/distribution.hpp"

#include <cmath>
#include <random>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <gtest/gtest.h>

#include "hrt/error.hpp"

namespace hrt {
namespace {

const Distribution kExp = Distribution::weibull(1.0, 1.0);
const Distribution kWeibullHalf = Distribution::weibull(0.5, 1.0);
const Distribution kStdLognormal = Distribution::lognormal(0.0, 1.0);
const Distribution kLognormal6dB = Distribution::lognormal_db(0.0, 6.0);

Distribution random_distribution(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  if (u(rng) < 0.5) {
    return Distribution::weibull(0.2 + 1.8 * u(rng), std::exp(-2.0 + 4.0 * u(rng)));
  }
  return Distribution::lognormal(-2.0 + 4.0 * u(rng), 0.2 + 2.8 * u(rng));
}

TEST(Pdf, ClosedFormValues) {
  EXPECT_NEAR(kExp.pdf(1.0), std::exp(-1.0), 1e-15);
  EXPECT_NEAR(kStdLognormal.pdf(1.0), 0.3989422804014327, 1e-15);
  EXPECT_NEAR(kWeibullHalf.pdf(4.0), 0.25 * std::exp(-2.0), 1e-15);
  // mpmath: npdf(ln 100 / sigma) / (sigma * 100)
  EXPECT_NEAR(kLognormal6dB.pdf(100.0) / 1.116338762740855e-05, 1.0, 1e-12);
}

TEST(Pdf, RejectsNonPositive) {
  EXPECT_THROW((void)kExp.pdf(0.0), DomainError);
  EXPECT_THROW((void)kStdLognormal.pdf(-1.0), DomainError);
}

TEST(Pdf, IntegratesToOne) {
  using Rule = boost::math::quadrature::gauss_kronrod<double, 61>;
  for (const auto& d : {kExp, kWeibullHalf, kStdLognormal, kLognormal6dB, Distribution::weibull(0.3, 2.0)}) {
    // x = exp(s) removes the endpoint behaviour at 0.
    auto g = [&](double s) { return std::exp(d.log_pdf(std::exp(s)) + s); };
    double total = 0.0;
    for (double a = -250.0; a < 60.0; a += 5.0) total += Rule::integrate(g, a, a + 5.0, 15, 1e-13);
    EXPECT_NEAR(total, 1.0, 1e-9) << d.describe();
  }
}

TEST(Survival, ClosedFormValues) {
  EXPECT_NEAR(kWeibullHalf.survival(100.0), std::exp(-10.0), 1e-18);
  EXPECT_NEAR(kStdLognormal.survival(1.0), 0.5, 1e-16);
  // mpmath quadrature: P(Z > ln(100)/sigma) = 4.2906033319683748e-4
  EXPECT_NEAR(kLognormal6dB.survival(100.0) / 4.2906033319683748e-4, 1.0, 1e-12);
  EXPECT_THROW((void)kExp.survival(0.0), DomainError);
}

TEST(Survival, LogSurvivalConsistent) {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 500; ++i) {
    const Distribution d = random_distribution(rng);
    const double x = d.quantile(std::uniform_real_distribution<double>(1e-6, 1.0 - 1e-6)(rng));
    const double s = d.survival(x);
    if (s > 1e-300) {
      EXPECT_NEAR(std::exp(d.log_survival(x)) / s, 1.0, 1e-12) << d.describe() << " x=" << x;
    }
  }
}

TEST(HazardRate, ClosedFormValues) {
  const Distribution exp2 = Distribution::weibull(1.0, 2.0);
  for (double x : {0.1, 1.0, 50.0}) EXPECT_NEAR(exp2.hazard_rate(x), 0.5, 1e-15);
  EXPECT_NEAR(kWeibullHalf.hazard_rate(4.0), 0.25, 1e-15);
  EXPECT_NEAR(kStdLognormal.hazard_rate(1.0), 0.7978845608028654, 1e-14);
  EXPECT_THROW((void)kExp.hazard_rate(0.0), DomainError);
}

TEST(HazardFunction, ClosedFormValues) {
  EXPECT_DOUBLE_EQ(kWeibullHalf.hazard_function(4.0), 2.0);
  EXPECT_NEAR(kStdLognormal.hazard_function(1.0), std::log(2.0), 1e-15);
  // -log of the mpmath survival value above.
  EXPECT_NEAR(kLognormal6dB.hazard_function(100.0), 7.7539130121022229, 1e-12);
  EXPECT_EQ(kLognormal6dB.hazard_function(0.0), 0.0);
  EXPECT_EQ(kWeibullHalf.hazard_function(0.0), 0.0);
  EXPECT_THROW((void)kExp.hazard_function(-1e-3), DomainError);
}

TEST(HazardFunction, DensityIdentity) {
  // f = lambda * exp(-Lambda)
  std::mt19937_64 rng(15);
  for (int i = 0; i < 1000; ++i) {
    const Distribution d = random_distribution(rng);
    const double x = d.quantile(std::uniform_real_distribution<double>(1e-9, 1.0 - 1e-9)(rng));
    const double f = d.pdf(x);
    EXPECT_LE(std::abs(f - d.hazard_rate(x) * std::exp(-d.hazard_function(x))), 1e-10 * f)
        << d.describe() << " x=" << x;
  }
}

TEST(HazardFunction, NegativeLogSurvivalViaIndependentPaths) {
  std::mt19937_64 rng(14);
  for (int i = 0; i < 1000; ++i) {
    const Distribution d = random_distribution(rng);
    const double x = d.quantile(std::uniform_real_distribution<double>(1e-9, 1.0 - 1e-9)(rng));
    const double big_lambda = d.hazard_function(x);
    const double s = d.survival(x);
    if (s > 1e-15) {
      EXPECT_LE(std::abs(big_lambda + std::log(s)), 1e-12 * std::max(1.0, big_lambda)) << d.describe();
    }
    const double f = d.cdf(x);
    if (f <= 0.5) {
      EXPECT_LE(std::abs(big_lambda + std::log1p(-f)), 1e-12 * std::max(1.0, big_lambda)) << d.describe();
    }
  }
}

TEST(HazardFunction, StrictlyIncreasing) {
  for (const auto& d : {kWeibullHalf, kLognormal6dB, kStdLognormal, Distribution::weibull(2.0, 3.0)}) {
    double prev = d.hazard_function(1e-3);
    for (int i = 1; i < 10000; ++i) {
      const double x = 1e-3 * std::pow(1e7, i / 9999.0);
      const double v = d.hazard_function(x);
      ASSERT_GT(v, prev) << d.describe() << " x=" << x;
      prev = v;
    }
  }
}

TEST(Quantile, ClosedFormValues) {
  EXPECT_NEAR(kWeibullHalf.quantile(1.0 - std::exp(-1.0)), 1.0, 1e-14);
  EXPECT_NEAR(kStdLognormal.quantile(0.5), 1.0, 1e-15);
  // exp(sigma * Phi_inv(0.975)); mpmath 14.996102172454181
  EXPECT_NEAR(kLognormal6dB.quantile(0.975), 14.996102172454181, 1e-11);
  for (double u : {0.0, 1.0, 1.5}) EXPECT_THROW((void)kExp.quantile(u), DomainError);
}

TEST(Quantile, BisectionOracleAgrees) {
  // Independent inversion by bisection in log x, on the survival side so u near 1 keeps full precision.
  for (double u : {0.01, 0.3, 0.975, 0.999999}) {
    const double tail = 1.0 - u;
    double lo = -50.0, hi = 50.0;
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      (kLognormal6dB.survival(std::exp(mid)) > tail ? lo : hi) = mid;
    }
    EXPECT_NEAR(kLognormal6dB.quantile(u) / std::exp(0.5 * (lo + hi)), 1.0, 1e-12) << u;
  }
}

TEST(Quantile, RoundTrip) {
  for (const auto& d : {kExp, kWeibullHalf, kStdLognormal, kLognormal6dB}) {
    for (double u : {1e-12, 1e-6, 0.1, 0.5, 0.9, 1.0 - 1e-6}) {
      EXPECT_NEAR(d.cdf(d.quantile(u)), u, 1e-9) << d.describe() << " u=" << u;
    }
  }
}

TEST(Quantile, FromLogSurvival) {
  for (const auto& d : {kWeibullHalf, kLognormal6dB}) {
    for (double ls : {-1e-10, -0.5, -10.0, -800.0, -20000.0}) {
      EXPECT_NEAR(d.log_survival(d.quantile_from_log_survival(ls)) / ls, 1.0, 1e-12) << d.describe() << ls;
    }
  }
}

TEST(FarTail, LognormalLogSurvivalAtZ40) {
  const double mu = 0.3, sigma = 1.2;
  const Distribution d = Distribution::lognormal(mu, sigma);
  const double z = 40.0;
  const double v = d.log_survival(std::exp(mu + z * sigma));
  ASSERT_TRUE(std::isfinite(v));
  const double lead = -0.5 * z * z - std::log(z * std::sqrt(2.0 * M_PI));
  EXPECT_NEAR(v / lead, 1.0, 0.01);
}

TEST(ConcavityOnset, WeibullSubexponentialIsZero) {
  EXPECT_EQ(Distribution::weibull(0.5, 3.0).concavity_onset(), 0.0);
  EXPECT_EQ(Distribution::weibull(0.9, 1.0).concavity_onset(), 0.0);
}

TEST(ConcavityOnset, LightTailedWeibullRejected) {
  EXPECT_THROW((void)Distribution::weibull(1.0, 1.0).concavity_onset(), UnsupportedFamily);
  EXPECT_THROW((void)Distribution::weibull(2.0, 1.0).concavity_onset(), UnsupportedFamily);
}

TEST(ConcavityOnset, LognormalRegression) {
  // mpmath root of phi(z)/Phi_bar(z) - z = sigma, eta = exp(mu + sigma z).
  EXPECT_NEAR(kLognormal6dB.concavity_onset(), 0.20578267692648023, 1e-12);
  EXPECT_NEAR(kStdLognormal.concavity_onset(), 0.61812882594012583, 1e-12);
}

TEST(ConcavityOnset, SecondDifferenceChangesSign) {
  // Lambda is convex before eta and concave after it.
  for (const auto& d : {kLognormal6dB, kStdLognormal, Distribution::lognormal(1.0, 0.4)}) {
    const double eta = d.concavity_onset();
    auto second_difference = [&](double x) {
      const double h = 1e-3 * x;
      return d.hazard_function(x + h) - 2.0 * d.hazard_function(x) + d.hazard_function(x - h);
    };
    EXPECT_GT(second_difference(0.8 * eta), 0.0) << d.describe();
    EXPECT_LT(second_difference(1.25 * eta), 0.0) << d.describe();
    for (double x = 1.25 * eta; x < 1e6; x *= 3.0) EXPECT_LT(second_difference(x), 0.0) << d.describe() << x;
  }
}

TEST(Decibels, Conversions) {
  EXPECT_DOUBLE_EQ(db_to_linear(0.0), 1.0);
  EXPECT_DOUBLE_EQ(db_to_linear(20.0), 100.0);
  EXPECT_NEAR(db_to_linear(25.0), 316.22776601683796, 1e-12);
  EXPECT_NEAR(linear_to_db(1000.0), 30.0, 1e-13);
}

TEST(Parameters, LognormalDbForm) {
  const auto p = LognormalParams::from_db(3.0, 6.0);
  EXPECT_NEAR(p.mu, std::log(10.0) / 10.0 * 3.0, 1e-15 * p.mu);
  EXPECT_NEAR(p.sigma, std::log(10.0) / 10.0 * 6.0, 1e-15 * p.sigma);
  EXPECT_DOUBLE_EQ(kDbToNeper, 0.230258509299404568401799);
}

TEST(Parameters, ValidatedAtConstruction) {
  EXPECT_THROW(Distribution::weibull(0.0, 1.0), DomainError);
  EXPECT_THROW(Distribution::weibull(0.5, -1.0), DomainError);
  EXPECT_THROW(Distribution::lognormal(0.0, 0.0), DomainError);
  EXPECT_THROW(Distribution::lognormal(NAN, 1.0), DomainError);
  EXPECT_THROW(Distribution(LognormalParams{0.5, 1.0, 0.0, 6.0}), DomainError);
  EXPECT_TRUE(WeibullParams({0.5, 1.0}).subexponential());
  EXPECT_FALSE(WeibullParams({1.0, 1.0}).subexponential());
}

}  // namespace
}  // namespace hrt
