#include "hrt/problem.hpp"

#include <cmath>
#include <utility>

#include <fmt/format.h>

#include "hrt/error.hpp"

namespace hrt {

SumProblem::SumProblem(std::vector<Distribution> components, double gamma)
    : components_(std::move(components)), gamma_(gamma) {
  if (components_.empty()) {
    throw DomainError("sum problem needs at least one component");
  }
  if (!(gamma > 0.0) || !std::isfinite(gamma)) {
    throw DomainError(fmt::format("threshold must be positive and finite (got {})", gamma));
  }
}

SumProblem SumProblem::from_db(std::vector<Distribution> components, double gamma_db) {
  SumProblem problem(std::move(components), db_to_linear(gamma_db));
  problem.gamma_db_ = gamma_db;
  return problem;
}

double SumProblem::gamma_in_db() const { return gamma_db_ ? *gamma_db_ : linear_to_db(gamma_); }

SumProblem SumProblem::with_gamma(double gamma) const { return SumProblem(components_, gamma); }

}  // namespace hrt
