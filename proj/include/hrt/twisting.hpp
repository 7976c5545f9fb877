#pragma once

#include "hrt/distribution.hpp"
#include "hrt/random_stream.hpp"

namespace hrt {

/// A component law with its hazard rate scaled by (1 - theta):
///   f_theta(x) = (1 - theta) f(x) exp(theta Lambda(x)).
/// theta = 0 is the base law; theta must lie in [0, 1).
class TwistedDistribution {
 public:
  TwistedDistribution(Distribution base, double theta);

  [[nodiscard]] const Distribution& base() const { return base_; }
  [[nodiscard]] double theta() const { return theta_; }

  [[nodiscard]] double pdf(double x) const;
  [[nodiscard]] double log_pdf(double x) const;
  /// 1 - (1 - F(x))^(1 - theta).
  [[nodiscard]] double cdf(double x) const;
  /// (1 - theta) * log(1 - F(x)).
  [[nodiscard]] double log_survival(double x) const;

  /// Inverse of cdf. Evaluated through the base log-survival, so y close to 1
  /// and large exponents 1/(1-theta) do not lose precision.
  [[nodiscard]] double quantile(double y) const;

  struct Draw {
    double value;
    bool saturated;  // the exact quantile overflowed and was clamped to DBL_MAX
  };

  /// One sample by exact inversion of the next uniform of `stream`.
  Draw draw(RandomStream& stream) const;
  double sample(RandomStream& stream) const { return draw(stream).value; }

 private:
  Draw quantile_checked(double y) const;

  Distribution base_;
  double theta_;
};

/// Twisting a Weibull(k, beta) yields Weibull(k, beta / (1 - theta)^(1/k)).
WeibullParams weibull_twist_equivalent(const WeibullParams& params, double theta);

}  // namespace hrt
