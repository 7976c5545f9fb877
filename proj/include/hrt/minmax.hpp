#pragma once

#include <cstddef>
#include <vector>

#include "hrt/problem.hpp"

namespace hrt {

/// Minimizer of sum_i Lambda_i(x_i) over {x >= 0, sum x = gamma} and the
/// twisting parameter derived from it.
struct MinmaxSolution {
  std::vector<double> x_star;
  double objective_A = 0.0;        // sum_i Lambda_i(x*_i)
  std::size_t dominant_index = 0;  // 0-based index of the largest coordinate of x*
  double theta_star = 0.0;
  double second_moment_bound = 1.0;
  bool clamped = false;  // objective_A <= N, theta forced to 0
};

struct SolverOptions {
  /// Stop when the largest coordinate update falls below this fraction of gamma.
  double step_tolerance = 1e-10;
  int max_iterations = 10000;
};

/// Global minimum of the hazard-function sum on the closed simplex.
///
/// Starts from every vertex and, when some concavity onset eta_j is positive,
/// from the extreme points (gamma - sum_{j != i} eta_j in slot i, eta_j elsewhere).
/// Each start is refined by pairwise mass exchange along e_i - e_j, choosing the
/// pair with the widest hazard-rate gap and line-searching the exchange. The best
/// refined point wins; ties go to the lowest start index.
MinmaxSolution solve_pprime(const SumProblem& problem, const SolverOptions& options = {});

/// 1 - n/A, or 0 when A <= n. Sets `clamped` when it clamps.
double theta_star(double objective_A, std::size_t n, bool* clamped = nullptr);

/// (1 - theta)^(-2n) exp(-2 theta A), the worst-case second moment of the
/// likelihood term over the exceedance set.
double second_moment_bound(double theta, double objective_A, std::size_t n);

/// 1 - n / Lambda(gamma), the identically distributed reference value (unclamped).
double iid_theta_reference(double hazard_at_gamma, std::size_t n);

/// Large-threshold dominant component (0-based).
/// All Weibull: smallest shape, ties to the largest scale.
/// All log-normal: largest sigma, ties to the largest mu.
/// Mixed families: smallest Lambda_i(gamma).
std::size_t dominant_index(const SumProblem& problem);

}  // namespace hrt
