#pragma once

#include <cstdint>
#include <vector>

#include "hrt/estimators.hpp"
#include "hrt/minmax.hpp"
#include "hrt/problem.hpp"

namespace hrt {

struct QuadratureConfig {
  /// Target error relative to the tail probability being computed.
  double relative_tolerance = 1e-10;
  /// Maximum bisection depth of the adaptive Gauss-Kronrod rule on each panel.
  unsigned max_subdivisions = 20;
};

struct QuadratureResult {
  double value;           // may underflow to 0 far in the tail
  double log_value;       // always finite for a positive tail
  double error_estimate;  // absolute
};

/// Closed-form survival of a single component.
double exact_tail_single(const Distribution& dist, double gamma);

/// P(X_1 + X_2 > gamma) by adaptive quadrature.
///
/// Uses the partition {X_1 <= g/2, X_1 + X_2 > g} + {X_2 <= g/2, ...} + {both > g/2}
/// with each integral written in the hazard variable w = Lambda(x):
///   int_0^{Lambda_1(g/2)} exp(-w) S_2(g - x_1(w)) dw.
/// The integrand is bounded and evaluated in log space with a per-panel shift.
/// Throws OracleFailure when the error estimate misses the tolerance.
QuadratureResult tail_convolution_2(const Distribution& first, const Distribution& second, double gamma,
                                    const QuadratureConfig& cfg = {});

struct GridOracleResult {
  std::vector<double> x_best;
  double objective;
};

/// Exhaustive minimum of sum Lambda_i over a regular grid of the simplex, vertices included.
/// N <= 3 only.
GridOracleResult grid_oracle_pprime(const SumProblem& problem, std::size_t grid_points_per_dim);

struct ThetaSweepRow {
  double theta;
  double second_moment_empirical;
  double second_moment_bound;
  double std_error;
};

struct ThetaSweep {
  MinmaxSolution solution;
  std::vector<ThetaSweepRow> rows;  // sorted by theta; contains theta*
};

/// One IS run per theta; grid point t uses derive_seed(seed, t), and the inserted
/// theta* (when absent from the grid) uses index theta_grid.size().
ThetaSweep theta_sensitivity_sweep(const SumProblem& problem, const std::vector<double>& theta_grid,
                                   std::uint64_t samples, std::uint64_t seed,
                                   const EstimatorOptions& options = {});

}  // namespace hrt
