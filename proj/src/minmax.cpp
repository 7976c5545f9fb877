#include "hrt/minmax.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <fmt/format.h>

#include "hrt/error.hpp"

namespace hrt {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double objective(const std::vector<Distribution>& comps, const std::vector<double>& x) {
  double sum = 0.0;
  for (std::size_t i = 0; i < comps.size(); ++i) {
    sum += comps[i].hazard_function(x[i]);
  }
  return sum;
}

// Right limit of the hazard rate at 0.
double rate_at(const Distribution& d, double x) {
  if (x > 0.0) {
    return d.hazard_rate(x);
  }
  if (const auto* w = d.as_weibull()) {
    if (w->shape < 1.0) return kInf;
    return w->shape == 1.0 ? 1.0 / w->scale : 0.0;
  }
  return 0.0;
}

// Minimizes phi on [lo, hi] by golden-section search.
template <class F>
double golden_section(F&& phi, double lo, double hi) {
  constexpr double kInvPhi = 0.61803398874989484820;
  double c = hi - kInvPhi * (hi - lo);
  double d = lo + kInvPhi * (hi - lo);
  double fc = phi(c);
  double fd = phi(d);
  for (int it = 0; it < 200 && hi - lo > 1e-14 * std::max(std::abs(lo), std::abs(hi)); ++it) {
    if (fc < fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - kInvPhi * (hi - lo);
      fc = phi(c);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + kInvPhi * (hi - lo);
      fd = phi(d);
    }
  }
  return fc < fd ? c : d;
}

void refine(const std::vector<Distribution>& comps, double gamma, std::vector<double>& x,
            const SolverOptions& options) {
  const std::size_t n = comps.size();
  if (n < 2) return;

  std::vector<double> grad(n);
  for (int iter = 0; iter < options.max_iterations; ++iter) {
    for (std::size_t i = 0; i < n; ++i) grad[i] = rate_at(comps[i], x[i]);

    // Donor: largest rate among coordinates with mass. Receiver: smallest rate elsewhere.
    std::size_t donor = n;
    for (std::size_t j = 0; j < n; ++j) {
      if (x[j] > 0.0 && (donor == n || grad[j] > grad[donor])) donor = j;
    }
    std::size_t receiver = n;
    for (std::size_t i = 0; i < n; ++i) {
      if (i != donor && (receiver == n || grad[i] < grad[receiver])) receiver = i;
    }
    if (donor == n || receiver == n || !(grad[donor] > grad[receiver])) return;

    const Distribution& di = comps[receiver];
    const Distribution& dj = comps[donor];
    const double xi = x[receiver];
    const double xj = x[donor];
    const double base = di.hazard_function(xi) + dj.hazard_function(xj);
    auto change = [&](double t) {
      const double rest = t >= xj ? 0.0 : xj - t;
      return di.hazard_function(xi + t) + dj.hazard_function(rest) - base;
    };

    // Coarse geometric scan of the exchange amount, then golden-section inside the best bracket.
    int best_m = -1;
    double best_val = 0.0;
    for (int m = 0; m <= 60; ++m) {
      const double v = change(std::ldexp(xj, -m));
      if (v < best_val) {
        best_val = v;
        best_m = m;
      }
    }
    if (best_m < 0) return;

    double t = std::ldexp(xj, -best_m);
    const double lo = std::ldexp(xj, -(best_m + 1));
    const double hi = best_m == 0 ? xj : std::ldexp(xj, -(best_m - 1));
    const double t_golden = golden_section(change, lo, hi);
    if (change(t_golden) < best_val) t = t_golden;

    if (t >= xj) {
      x[receiver] = xi + xj;
      x[donor] = 0.0;
    } else {
      x[receiver] = xi + t;
      x[donor] = xj - t;
    }
    if (t < options.step_tolerance * gamma) return;
  }
}

}  // namespace

double theta_star(double objective_A, std::size_t n, bool* clamped) {
  if (objective_A < 0.0 || std::isnan(objective_A)) {
    throw DomainError(fmt::format("theta_star: objective must be nonnegative (got {})", objective_A));
  }
  if (n == 0) {
    throw DomainError("theta_star: n must be positive");
  }
  const bool clamp = objective_A <= static_cast<double>(n);
  if (clamped) *clamped = clamp;
  return clamp ? 0.0 : 1.0 - static_cast<double>(n) / objective_A;
}

double second_moment_bound(double theta, double objective_A, std::size_t n) {
  if (!(theta >= 0.0 && theta < 1.0)) {
    throw DomainError(fmt::format("second_moment_bound: theta must lie in [0, 1) (got {})", theta));
  }
  return std::exp(-2.0 * static_cast<double>(n) * std::log1p(-theta) - 2.0 * theta * objective_A);
}

double iid_theta_reference(double hazard_at_gamma, std::size_t n) {
  if (!(hazard_at_gamma > 0.0)) {
    throw DomainError("iid_theta_reference: hazard at the threshold must be positive");
  }
  return 1.0 - static_cast<double>(n) / hazard_at_gamma;
}

MinmaxSolution solve_pprime(const SumProblem& problem, const SolverOptions& options) {
  const auto& comps = problem.components();
  const std::size_t n = comps.size();
  const double gamma = problem.gamma();

  // One component: the only feasible point, for any family.
  std::vector<double> eta(n, 0.0);
  if (n > 1) {
    for (std::size_t i = 0; i < n; ++i) eta[i] = comps[i].concavity_onset();
  }

  std::vector<std::vector<double>> starts;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> v(n, 0.0);
    v[i] = gamma;
    starts.push_back(std::move(v));
  }
  if (n > 1 && std::any_of(eta.begin(), eta.end(), [](double e) { return e > 0.0; })) {
    const double eta_sum = std::accumulate(eta.begin(), eta.end(), 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      const double xi = gamma - (eta_sum - eta[i]);
      if (xi < 0.0) continue;
      std::vector<double> v = eta;
      v[i] = xi;
      starts.push_back(std::move(v));
    }
  }

  std::vector<double> best_x;
  double best_obj = kInf;
  for (auto& x : starts) {
    refine(comps, gamma, x, options);
    const double obj = objective(comps, x);
    if (obj < best_obj) {
      best_obj = obj;
      best_x = x;
    }
  }

  MinmaxSolution sol;
  sol.x_star = std::move(best_x);
  sol.objective_A = best_obj;
  sol.dominant_index = static_cast<std::size_t>(
      std::distance(sol.x_star.begin(), std::max_element(sol.x_star.begin(), sol.x_star.end())));
  sol.theta_star = theta_star(best_obj, n, &sol.clamped);
  sol.second_moment_bound = second_moment_bound(sol.theta_star, best_obj, n);
  return sol;
}

std::size_t dominant_index(const SumProblem& problem) {
  const auto& comps = problem.components();
  const std::size_t n = comps.size();
  const bool all_weibull =
      std::all_of(comps.begin(), comps.end(), [](const auto& d) { return d.family() == Family::Weibull; });
  const bool all_lognormal =
      std::all_of(comps.begin(), comps.end(), [](const auto& d) { return d.family() == Family::Lognormal; });

  std::size_t best = 0;
  if (all_weibull) {
    for (std::size_t i = 1; i < n; ++i) {
      const auto& a = *comps[i].as_weibull();
      const auto& b = *comps[best].as_weibull();
      if (a.shape < b.shape || (a.shape == b.shape && a.scale > b.scale)) best = i;
    }
  } else if (all_lognormal) {
    for (std::size_t i = 1; i < n; ++i) {
      const auto& a = *comps[i].as_lognormal();
      const auto& b = *comps[best].as_lognormal();
      if (a.sigma > b.sigma || (a.sigma == b.sigma && a.mu > b.mu)) best = i;
    }
  } else {
    double best_val = comps[0].hazard_function(problem.gamma());
    for (std::size_t i = 1; i < n; ++i) {
      const double v = comps[i].hazard_function(problem.gamma());
      if (v < best_val) {
        best_val = v;
        best = i;
      }
    }
  }
  return best;
}

}  // namespace hrt
