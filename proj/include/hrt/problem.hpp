#pragma once

#include <optional>
#include <vector>

#include "hrt/distribution.hpp"

namespace hrt {

/// P(X_1 + ... + X_N > gamma) for independent components.
class SumProblem {
 public:
  SumProblem(std::vector<Distribution> components, double gamma);
  static SumProblem from_db(std::vector<Distribution> components, double gamma_db);

  [[nodiscard]] const std::vector<Distribution>& components() const { return components_; }
  [[nodiscard]] std::size_t size() const { return components_.size(); }
  [[nodiscard]] double gamma() const { return gamma_; }
  /// The dB value the problem was built from, if any.
  [[nodiscard]] std::optional<double> gamma_db() const { return gamma_db_; }
  /// 10 log10(gamma), whether or not the problem was built in dB.
  [[nodiscard]] double gamma_in_db() const;

  /// Same components, different threshold.
  [[nodiscard]] SumProblem with_gamma(double gamma) const;

 private:
  std::vector<Distribution> components_;
  double gamma_;
  std::optional<double> gamma_db_;
};

}  // namespace hrt
