#include "hrt/normal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "hrt/error.hpp"

namespace hrt::normal {
namespace {

constexpr double kTailSwitch = 8.0;
constexpr int kContinuedFractionTerms = 80;
constexpr double kPi = 3.14159265358979323846;

// Acklam's rational approximation to the normal quantile, relative error ~1.15e-9.
double acklam(double p) {
  static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                 -2.759285104469687e+02, 1.383577518672690e+02,
                                 -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                 -1.556989798598866e+02, 6.680131188771972e+01,
                                 -1.328068155288572e+01};
  static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                 -2.400758277161838e+00, -2.549732539343734e+00,
                                 4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                 2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double p_low = 0.02425;

  if (p < p_low) {
    const double q = std::sqrt(-2.0 * std::log(p));
    return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  if (p <= 1.0 - p_low) {
    const double q = p - 0.5;
    const double r = q * q;
    return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
           (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  }
  const double q = std::sqrt(-2.0 * std::log1p(-p));
  return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
         ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
}

}  // namespace

double phi(double z) { return kInvSqrt2Pi * std::exp(-0.5 * z * z); }

double log_phi(double z) { return -0.5 * z * z - kLogSqrt2Pi; }

double mills_ratio(double z) {
  if (z < kTailSwitch) {
    return 0.5 * std::erfc(z / kSqrt2) / phi(z);
  }
  // R(z) = 1/(z + 1/(z + 2/(z + 3/(z + ...)))), evaluated backwards.
  double t = z;
  for (int k = kContinuedFractionTerms; k >= 1; --k) {
    t = z + k / t;
  }
  return 1.0 / t;
}

double Phi(double z) {
  if (z < -kTailSwitch) {
    return Phi_bar(-z);
  }
  return 0.5 * std::erfc(-z / kSqrt2);
}

double Phi_bar(double z) {
  if (z > kTailSwitch) {
    return std::exp(log_phi(z)) * mills_ratio(z);
  }
  return 0.5 * std::erfc(z / kSqrt2);
}

double log_Phi_bar(double z) {
  if (std::isnan(z)) {
    return z;
  }
  if (z > kTailSwitch) {
    return log_phi(z) + std::log(mills_ratio(z));
  }
  if (z > -1.0) {
    return std::log(0.5 * std::erfc(z / kSqrt2));
  }
  return std::log1p(-Phi(z));
}

double Phi_inv(double u) {
  if (!(u > 0.0 && u < 1.0)) {
    throw DomainError("Phi_inv: probability must lie in (0, 1)");
  }
  double z = acklam(u);
  if (u < 0.5) {
    z -= (Phi(z) - u) / phi(z);
  } else {
    const double q = 1.0 - u;
    z += (Phi_bar(z) - q) / phi(z);
  }
  return z;
}

double Phi_bar_inv_log(double log_q) {
  if (!(log_q < 0.0)) {
    throw DomainError("Phi_bar_inv_log: log probability must be negative");
  }
  if (log_q == -std::numeric_limits<double>::infinity()) {
    return std::numeric_limits<double>::infinity();
  }

  double z;
  if (log_q > -700.0) {
    const double q = std::exp(log_q);
    z = q < 0.5 ? -acklam(q) : acklam(-std::expm1(log_q));
  } else {
    z = std::sqrt(-2.0 * log_q);
    z = std::sqrt(-2.0 * log_q - 2.0 * std::log(z * std::sqrt(2.0 * kPi)));
  }

  // Newton on log_Phi_bar(z) - log_q; d/dz log_Phi_bar = -phi/Phi_bar.
  for (int it = 0; it < 50; ++it) {
    const double lpb = log_Phi_bar(z);
    const double step = (lpb - log_q) * std::exp(lpb - log_phi(z));
    z += step;
    if (std::abs(step) <= 1e-15 * std::max(1.0, std::abs(z))) {
      break;
    }
  }
  return z;
}

}  // namespace hrt::normal
