#include "hrt/twisting.hpp"

#include <cmath>
#include <limits>
#include <utility>

#include <fmt/format.h>

#include "hrt/error.hpp"

namespace hrt {
namespace {

void require_theta(double theta) {
  if (!(theta >= 0.0 && theta < 1.0)) {
    throw DomainError(fmt::format("twisting parameter must lie in [0, 1) (got {})", theta));
  }
}

}  // namespace

TwistedDistribution::TwistedDistribution(Distribution base, double theta)
    : base_(std::move(base)), theta_(theta) {
  require_theta(theta);
}

double TwistedDistribution::log_pdf(double x) const {
  if (theta_ == 0.0) {
    return base_.log_pdf(x);
  }
  return std::log1p(-theta_) + base_.log_pdf(x) - theta_ * base_.log_survival(x);
}

double TwistedDistribution::pdf(double x) const { return std::exp(log_pdf(x)); }

double TwistedDistribution::log_survival(double x) const {
  return (1.0 - theta_) * base_.log_survival(x);
}

double TwistedDistribution::cdf(double x) const {
  if (theta_ == 0.0) {
    return base_.cdf(x);
  }
  return -std::expm1(log_survival(x));
}

TwistedDistribution::Draw TwistedDistribution::quantile_checked(double y) const {
  if (!(y > 0.0 && y < 1.0)) {
    throw DomainError(fmt::format("twisted quantile: probability must lie in (0, 1) (got {})", y));
  }
  if (theta_ == 0.0) {
    return {base_.quantile(y), false};
  }
  // 1 - u' = (1 - y)^(1/(1-theta)), kept as a logarithm.
  const double log_s = std::log1p(-y) / (1.0 - theta_);
  const double x = base_.quantile_from_log_survival(log_s);
  if (!std::isfinite(x)) {
    return {std::numeric_limits<double>::max(), true};
  }
  return {x, false};
}

double TwistedDistribution::quantile(double y) const { return quantile_checked(y).value; }

TwistedDistribution::Draw TwistedDistribution::draw(RandomStream& stream) const {
  return quantile_checked(stream.next_uniform());
}

WeibullParams weibull_twist_equivalent(const WeibullParams& params, double theta) {
  require_theta(theta);
  return WeibullParams{params.shape, params.scale / std::pow(1.0 - theta, 1.0 / params.shape)};
}

}  // namespace hrt
