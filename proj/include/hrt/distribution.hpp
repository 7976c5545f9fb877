#pragma once

#include <optional>
#include <string>
#include <variant>

namespace hrt {

/// ln(10)/10: converts a decibel-domain log-normal parameter to the natural-log domain.
inline constexpr double kDbToNeper = 0.23025850929940456840;

/// 10^(g_dB/10).
double db_to_linear(double g_db);
/// 10*log10(g).
double linear_to_db(double g);

struct WeibullParams {
  double shape;  // k
  double scale;  // beta

  /// Heavier than exponential iff the shape is below one.
  [[nodiscard]] bool subexponential() const { return shape < 1.0; }
};

struct LognormalParams {
  double mu;     // mean of log X
  double sigma;  // standard deviation of log X
  std::optional<double> mu_db;
  std::optional<double> sigma_db;

  /// Builds the natural-domain parameters from the decibel form.
  static LognormalParams from_db(double mu_db, double sigma_db);
};

enum class Family { Weibull, Lognormal };

std::string to_string(Family family);

/// One positive component law. Immutable; parameters are validated on construction.
///
/// Every tail quantity is computed from `log_survival`, which never forms 1 - F,
/// so hazard functions stay accurate where the survival function is far below
/// double precision epsilon.
class Distribution {
 public:
  explicit Distribution(WeibullParams params);
  explicit Distribution(LognormalParams params);

  static Distribution weibull(double shape, double scale);
  static Distribution lognormal(double mu, double sigma);
  static Distribution lognormal_db(double mu_db, double sigma_db);

  [[nodiscard]] Family family() const;
  [[nodiscard]] const std::variant<WeibullParams, LognormalParams>& params() const {
    return params_;
  }
  [[nodiscard]] const WeibullParams* as_weibull() const { return std::get_if<WeibullParams>(&params_); }
  [[nodiscard]] const LognormalParams* as_lognormal() const {
    return std::get_if<LognormalParams>(&params_);
  }

  [[nodiscard]] double pdf(double x) const;
  [[nodiscard]] double log_pdf(double x) const;
  [[nodiscard]] double cdf(double x) const;
  [[nodiscard]] double survival(double x) const;
  [[nodiscard]] double log_survival(double x) const;

  /// lambda(x) = f(x) / (1 - F(x)).
  [[nodiscard]] double hazard_rate(double x) const;
  /// Lambda(x) = -log(1 - F(x)); Lambda(0) = 0.
  [[nodiscard]] double hazard_function(double x) const;

  [[nodiscard]] double quantile(double u) const;
  /// The x with log_survival(x) == log_s, for any log_s < 0 (including far below log(DBL_MIN)).
  [[nodiscard]] double quantile_from_log_survival(double log_s) const;

  /// Smallest eta such that the hazard function is concave on [eta, inf).
  /// Throws UnsupportedFamily for Weibull shapes >= 1.
  [[nodiscard]] double concavity_onset() const;

  [[nodiscard]] std::string describe() const;

 private:
  std::variant<WeibullParams, LognormalParams> params_;
  double concavity_onset_ = 0.0;  // cached; meaningless for light-tailed Weibull
};

}  // namespace hrt
