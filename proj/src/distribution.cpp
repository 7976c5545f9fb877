#include "hrt/distribution.hpp"

#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "hrt/error.hpp"
#include "hrt/normal.hpp"

namespace hrt {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void require_positive_support(double x, const char* op) {
  if (!(x > 0.0)) {
    throw DomainError(fmt::format("{}: x must be positive (got {})", op, x));
  }
}

bool finite_positive(double v) { return std::isfinite(v) && v > 0.0; }

// Lambda'' = lambda', so the hazard function turns concave where the hazard rate peaks.
// For the log-normal that is the root of h(z) = phi(z)/Phi_bar(z) - z = sigma, h decreasing.
double lognormal_hazard_mode(const LognormalParams& p) {
  auto h = [](double z) {
    return std::exp(normal::log_phi(z) - normal::log_Phi_bar(z)) - z;
  };
  double lo = -1.0;
  while (h(lo) < p.sigma) lo *= 2.0;
  double hi = 1.0;
  while (h(hi) > p.sigma) hi *= 2.0;
  for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, std::abs(lo)); ++it) {
    const double mid = 0.5 * (lo + hi);
    (h(mid) > p.sigma ? lo : hi) = mid;
  }
  return std::exp(p.mu + p.sigma * 0.5 * (lo + hi));
}

}  // namespace

double db_to_linear(double g_db) { return std::pow(10.0, g_db / 10.0); }

double linear_to_db(double g) { return 10.0 * std::log10(g); }

LognormalParams LognormalParams::from_db(double mu_db, double sigma_db) {
  return LognormalParams{kDbToNeper * mu_db, kDbToNeper * sigma_db, mu_db, sigma_db};
}

std::string to_string(Family family) {
  return family == Family::Weibull ? "weibull" : "lognormal";
}

Distribution::Distribution(WeibullParams params) : params_(params) {
  if (!finite_positive(params.shape) || !finite_positive(params.scale)) {
    throw DomainError(fmt::format("weibull: shape and scale must be positive and finite (got k={}, beta={})",
                                  params.shape, params.scale));
  }
}

Distribution::Distribution(LognormalParams params) : params_(params) {
  if (!finite_positive(params.sigma) || !std::isfinite(params.mu)) {
    throw DomainError(fmt::format("lognormal: sigma must be positive and mu finite (got mu={}, sigma={})",
                                  params.mu, params.sigma));
  }
  if (params.mu_db.has_value() != params.sigma_db.has_value()) {
    throw DomainError("lognormal: mu_dB and sigma_dB must be given together");
  }
  if (params.mu_db) {
    const double mu = kDbToNeper * *params.mu_db;
    const double sigma = kDbToNeper * *params.sigma_db;
    if (std::abs(mu - params.mu) > 1e-15 * std::max(1.0, std::abs(mu)) ||
        std::abs(sigma - params.sigma) > 1e-15 * sigma) {
      throw DomainError("lognormal: natural-domain parameters disagree with the dB form");
    }
  }
  concavity_onset_ = lognormal_hazard_mode(params);
}

Distribution Distribution::weibull(double shape, double scale) {
  return Distribution(WeibullParams{shape, scale});
}

Distribution Distribution::lognormal(double mu, double sigma) {
  return Distribution(LognormalParams{mu, sigma, std::nullopt, std::nullopt});
}

Distribution Distribution::lognormal_db(double mu_db, double sigma_db) {
  return Distribution(LognormalParams::from_db(mu_db, sigma_db));
}

Family Distribution::family() const {
  return std::holds_alternative<WeibullParams>(params_) ? Family::Weibull : Family::Lognormal;
}

double Distribution::log_pdf(double x) const {
  require_positive_support(x, "pdf");
  return std::visit(Overloaded{
                        [x](const WeibullParams& p) {
                          const double r = x / p.scale;
                          return std::log(p.shape / p.scale) + (p.shape - 1.0) * std::log(r) -
                                 std::pow(r, p.shape);
                        },
                        [x](const LognormalParams& p) {
                          const double z = (std::log(x) - p.mu) / p.sigma;
                          return normal::log_phi(z) - std::log(p.sigma * x);
                        },
                    },
                    params_);
}

double Distribution::pdf(double x) const { return std::exp(log_pdf(x)); }

double Distribution::log_survival(double x) const {
  require_positive_support(x, "survival");
  return std::visit(Overloaded{
                        [x](const WeibullParams& p) { return -std::pow(x / p.scale, p.shape); },
                        [x](const LognormalParams& p) {
                          return normal::log_Phi_bar((std::log(x) - p.mu) / p.sigma);
                        },
                    },
                    params_);
}

double Distribution::survival(double x) const {
  if (const auto* p = as_lognormal()) {
    require_positive_support(x, "survival");
    return normal::Phi_bar((std::log(x) - p->mu) / p->sigma);
  }
  return std::exp(log_survival(x));
}

double Distribution::cdf(double x) const {
  if (const auto* p = as_lognormal()) {
    require_positive_support(x, "cdf");
    return normal::Phi((std::log(x) - p->mu) / p->sigma);
  }
  return -std::expm1(log_survival(x));
}

double Distribution::hazard_rate(double x) const {
  require_positive_support(x, "hazard_rate");
  if (const auto* p = as_weibull()) {
    return p->shape / p->scale * std::pow(x / p->scale, p->shape - 1.0);
  }
  return std::exp(log_pdf(x) - log_survival(x));
}

double Distribution::hazard_function(double x) const {
  if (x < 0.0 || std::isnan(x)) {
    throw DomainError(fmt::format("hazard_function: x must be nonnegative (got {})", x));
  }
  if (x == 0.0) {
    return 0.0;
  }
  return -log_survival(x);
}

double Distribution::quantile(double u) const {
  if (!(u > 0.0 && u < 1.0)) {
    throw DomainError(fmt::format("quantile: probability must lie in (0, 1) (got {})", u));
  }
  return std::visit(Overloaded{
                        [u](const WeibullParams& p) {
                          return p.scale * std::pow(-std::log1p(-u), 1.0 / p.shape);
                        },
                        [u](const LognormalParams& p) {
                          return std::exp(p.mu + p.sigma * normal::Phi_inv(u));
                        },
                    },
                    params_);
}

double Distribution::quantile_from_log_survival(double log_s) const {
  if (!(log_s < 0.0)) {
    throw DomainError(fmt::format("quantile_from_log_survival: log survival must be negative (got {})", log_s));
  }
  return std::visit(Overloaded{
                        [log_s](const WeibullParams& p) {
                          return p.scale * std::pow(-log_s, 1.0 / p.shape);
                        },
                        [log_s](const LognormalParams& p) {
                          return std::exp(p.mu + p.sigma * normal::Phi_bar_inv_log(log_s));
                        },
                    },
                    params_);
}

double Distribution::concavity_onset() const {
  if (const auto* p = as_weibull(); p && !p->subexponential()) {
    throw UnsupportedFamily(fmt::format(
        "hazard function not eventually concave under this family restriction (weibull shape {} >= 1)",
        p->shape));
  }
  return concavity_onset_;
}

std::string Distribution::describe() const {
  return std::visit(Overloaded{
                        [](const WeibullParams& p) {
                          return fmt::format("weibull(k={}, beta={})", p.shape, p.scale);
                        },
                        [](const LognormalParams& p) {
                          return fmt::format("lognormal(mu={}, sigma={})", p.mu, p.sigma);
                        },
                    },
                    params_);
}

}  // namespace hrt
