#include "hrt/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <fmt/format.h>

#include "hrt/error.hpp"
#include "hrt/random_stream.hpp"

namespace hrt {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double log_add(double a, double b) {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  const double hi = std::max(a, b);
  return hi + std::log1p(std::exp(std::min(a, b) - hi));
}

struct LogIntegral {
  double log_value = kNegInf;
  double log_error = kNegInf;
};

// log of int_0^{Lambda_1(g/2)} exp(-w) S_2(g - x_1(w)) dw.
LogIntegral half_convolution(const Distribution& first, const Distribution& second, double gamma,
                             const QuadratureConfig& cfg) {
  const double half = 0.5 * gamma;
  auto log_integrand = [&](double w) {
    const double x = w > 0.0 ? first.quantile_from_log_survival(-w) : 0.0;
    const double rest = gamma - x;
    return -w + (rest > 0.0 ? second.log_survival(rest) : 0.0);
  };

  // Panel breakpoints: hazard values of a geometric grid toward 0, plus the integrand's mode.
  const double w_end = first.hazard_function(half);
  std::vector<double> cuts{0.0, w_end};
  for (int m = 1; m <= 40; ++m) {
    const double w = first.hazard_function(std::ldexp(half, -m));
    if (w > 0.0 && w < w_end) cuts.push_back(w);
  }
  {
    constexpr int kScan = 256;
    double best = kNegInf;
    double w_mode = 0.0;
    for (int s = 1; s < kScan; ++s) {
      const double w = w_end * s / kScan;
      const double v = log_integrand(w);
      if (v > best) {
        best = v;
        w_mode = w;
      }
    }
    cuts.push_back(w_mode);
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  using Rule = boost::math::quadrature::gauss_kronrod<double, 31>;
  LogIntegral total;
  for (std::size_t p = 0; p + 1 < cuts.size(); ++p) {
    const double a = cuts[p];
    const double b = cuts[p + 1];
    double shift = kNegInf;
    for (int s = 0; s <= 8; ++s) {
      shift = std::max(shift, log_integrand(a + (b - a) * s / 8.0));
    }
    if (shift == kNegInf) continue;
    // Integrate over the unit interval so the normalized integral is O(1) whatever the panel width.
    const double width = b - a;
    double error = 0.0;
    double value = Rule::integrate([&](double t) { return std::exp(log_integrand(a + width * t) - shift); }, 0.0,
                                   1.0, cfg.max_subdivisions, 0.1 * cfg.relative_tolerance, &error);
    value *= width;
    error *= width;
    if (!std::isfinite(value) || !std::isfinite(error)) {
      throw OracleFailure(fmt::format("convolution quadrature produced a non-finite panel on [{}, {}]", a, b));
    }
    if (value > 0.0) total.log_value = log_add(total.log_value, shift + std::log(value));
    if (error > 0.0) total.log_error = log_add(total.log_error, shift + std::log(error));
  }
  return total;
}

}  // namespace

double exact_tail_single(const Distribution& dist, double gamma) { return dist.survival(gamma); }

QuadratureResult tail_convolution_2(const Distribution& first, const Distribution& second, double gamma,
                                    const QuadratureConfig& cfg) {
  if (!(gamma > 0.0)) {
    throw DomainError("tail_convolution_2: threshold must be positive");
  }
  if (!(cfg.relative_tolerance > 0.0)) {
    throw DomainError("tail_convolution_2: tolerance must be positive");
  }
  const double half = 0.5 * gamma;
  const LogIntegral a = half_convolution(first, second, gamma, cfg);
  const LogIntegral b = half_convolution(second, first, gamma, cfg);
  const double log_corner = first.log_survival(half) + second.log_survival(half);

  const double log_value = log_add(log_add(a.log_value, b.log_value), log_corner);
  const double log_error = log_add(a.log_error, b.log_error);
  const double relative_error = std::exp(log_error - log_value);
  if (!(relative_error <= cfg.relative_tolerance)) {
    throw OracleFailure(fmt::format(
        "convolution quadrature did not converge at gamma={}: relative error {:.3e} > tolerance {:.3e}", gamma,
        relative_error, cfg.relative_tolerance));
  }
  return QuadratureResult{std::exp(log_value), log_value, std::exp(log_error)};
}

GridOracleResult grid_oracle_pprime(const SumProblem& problem, std::size_t grid_points_per_dim) {
  const auto& comps = problem.components();
  const std::size_t n = comps.size();
  if (n > 3) {
    throw UnsupportedFamily("grid oracle supports at most three components");
  }
  if (grid_points_per_dim < 2) {
    throw DomainError("grid oracle needs at least two points per dimension");
  }
  const double gamma = problem.gamma();
  const std::size_t steps = grid_points_per_dim - 1;
  auto coord = [&](std::size_t k) { return k == steps ? gamma : gamma * static_cast<double>(k) / steps; };

  GridOracleResult best{{}, std::numeric_limits<double>::infinity()};
  auto consider = [&](std::vector<double> x) {
    double obj = 0.0;
    for (std::size_t i = 0; i < n; ++i) obj += comps[i].hazard_function(x[i]);
    if (obj < best.objective) best = {std::move(x), obj};
  };

  if (n == 1) {
    consider({gamma});
  } else if (n == 2) {
    for (std::size_t k = 0; k <= steps; ++k) consider({coord(k), coord(steps - k)});
  } else {
    for (std::size_t a = 0; a <= steps; ++a) {
      for (std::size_t b = 0; a + b <= steps; ++b) {
        const double xa = coord(a);
        const double xb = coord(b);
        consider({xa, xb, std::max(0.0, gamma - xa - xb)});
      }
    }
  }
  return best;
}

ThetaSweep theta_sensitivity_sweep(const SumProblem& problem, const std::vector<double>& theta_grid,
                                   std::uint64_t samples, std::uint64_t seed, const EstimatorOptions& options) {
  ThetaSweep sweep;
  sweep.solution = solve_pprime(problem);
  const std::size_t n = problem.size();

  std::vector<std::pair<double, std::uint64_t>> points;
  for (std::size_t t = 0; t < theta_grid.size(); ++t) points.emplace_back(theta_grid[t], t);
  const double ts = sweep.solution.theta_star;
  if (std::none_of(theta_grid.begin(), theta_grid.end(), [ts](double th) { return th == ts; })) {
    points.emplace_back(ts, theta_grid.size());
  }
  std::stable_sort(points.begin(), points.end(), [](const auto& l, const auto& r) { return l.first < r.first; });

  for (const auto& [theta, index] : points) {
    const EstimateResult r = is_estimate(problem, theta, samples, derive_seed(seed, index), options);
    sweep.rows.push_back(ThetaSweepRow{theta, r.second_moment_T,
                                       second_moment_bound(theta, sweep.solution.objective_A, n),
                                       r.second_moment_std_error});
  }
  return sweep;
}

}  // namespace hrt
