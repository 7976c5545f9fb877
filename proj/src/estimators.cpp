#include "hrt/estimators.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <limits>
#include <thread>

#include <fmt/format.h>

#include "hrt/error.hpp"
#include "hrt/twisting.hpp"

namespace hrt {
namespace {

constexpr std::uint64_t kBlockSize = 4096;

// Neumaier compensated sum.
struct CompensatedSum {
  double sum = 0.0;
  double carry = 0.0;

  void add(double v) {
    const double t = sum + v;
    if (std::abs(sum) >= std::abs(v)) {
      carry += (sum - t) + v;
    } else {
      carry += (v - t) + sum;
    }
    sum = t;
  }
  [[nodiscard]] double value() const { return sum + carry; }
};

struct BlockStats {
  CompensatedSum t;
  CompensatedSum t2;
  CompensatedSum t4;
  std::uint64_t hits = 0;
  std::uint64_t saturated = 0;
  double max_log_l = -std::numeric_limits<double>::infinity();
};

struct SamplingPlan {
  std::vector<TwistedDistribution> laws;
  double gamma;
  double theta;
  double log_norm;  // -N log(1 - theta)
  std::uint64_t seed;
};

void run_block(const SamplingPlan& plan, std::uint64_t first, std::uint64_t last, BlockStats& out,
               SampleRecord* records) {
  const std::size_t n = plan.laws.size();
  for (std::uint64_t j = first; j < last; ++j) {
    double sum = 0.0;
    double hazard_sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      RandomStream stream(plan.seed, j * n + i);
      const auto draw = plan.laws[i].draw(stream);
      if (draw.saturated) ++out.saturated;
      sum += draw.value;
      if (plan.theta > 0.0) hazard_sum += plan.laws[i].base().hazard_function(draw.value);
    }
    const bool hit = sum > plan.gamma;
    const double log_l = plan.theta > 0.0 ? plan.log_norm - plan.theta * hazard_sum : 0.0;
    if (records) records[j - first] = SampleRecord{sum, log_l, hit};
    if (!hit) continue;
    ++out.hits;
    out.max_log_l = std::max(out.max_log_l, log_l);
    const double t = std::exp(log_l);
    const double t2 = t * t;
    out.t.add(t);
    out.t2.add(t2);
    out.t4.add(t2 * t2);
  }
}

EstimateResult run(const SumProblem& problem, double theta, std::uint64_t samples, std::uint64_t seed,
                   Method method, const EstimatorOptions& options) {
  if (samples == 0) {
    throw DomainError("sample count must be positive");
  }
  const auto start = std::chrono::steady_clock::now();

  SamplingPlan plan{{}, problem.gamma(), theta,
                    -static_cast<double>(problem.size()) * std::log1p(-theta), seed};
  plan.laws.reserve(problem.size());
  for (const auto& c : problem.components()) plan.laws.emplace_back(c, theta);

  const std::uint64_t blocks = (samples + kBlockSize - 1) / kBlockSize;
  std::vector<BlockStats> stats(blocks);
  std::vector<SampleRecord> records(options.retain_samples ? samples : 0);

  auto work = [&](std::uint64_t b) {
    const std::uint64_t first = b * kBlockSize;
    const std::uint64_t last = std::min(samples, first + kBlockSize);
    run_block(plan, first, last, stats[b], options.retain_samples ? records.data() + first : nullptr);
  };

  unsigned workers = options.workers ? options.workers : std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::uint64_t>(workers, blocks));
  if (workers <= 1) {
    for (std::uint64_t b = 0; b < blocks; ++b) work(b);
  } else {
    std::atomic<std::uint64_t> next{0};
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::uint64_t b = next++; b < blocks; b = next++) work(b);
      });
    }
  }

  // Merge in block order.
  CompensatedSum t, t2, t4;
  EstimateResult r;
  r.max_log_likelihood_hit = -std::numeric_limits<double>::infinity();
  for (const auto& s : stats) {
    t.add(s.t.value());
    t2.add(s.t2.value());
    t4.add(s.t4.value());
    r.hit_frequency += s.hits;
    r.saturated_samples += s.saturated;
    r.max_log_likelihood_hit = std::max(r.max_log_likelihood_hit, s.max_log_l);
  }

  const double m = static_cast<double>(samples);
  r.method = method;
  r.sample_count = samples;
  r.seed = seed;
  r.theta_used = theta;
  r.mean_T = t.value() / m;
  r.alpha_hat = method == Method::Naive ? static_cast<double>(r.hit_frequency) / m : r.mean_T;
  r.second_moment_T = t2.value() / m;
  if (samples > 1) {
    const double scale = m / (m - 1.0);
    r.variance_T = std::max(0.0, scale * (r.second_moment_T - r.mean_T * r.mean_T));
    const double var_t2 = std::max(0.0, scale * (t4.value() / m - r.second_moment_T * r.second_moment_T));
    r.second_moment_std_error = std::sqrt(var_t2 / m);
  }
  r.standard_error = std::sqrt(r.variance_T / m);
  r.relative_error = r.alpha_hat > 0.0
                         ? options.confidence.confidence_constant * r.standard_error / r.alpha_hat
                         : std::numeric_limits<double>::infinity();
  r.samples = std::move(records);
  r.duration_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

}  // namespace

std::string to_string(Method method) { return method == Method::Naive ? "naive" : "hazard_twist_is"; }

EstimateResult naive_mc(const SumProblem& problem, std::uint64_t samples, std::uint64_t seed,
                        const EstimatorOptions& options) {
  return run(problem, 0.0, samples, seed, Method::Naive, options);
}

EstimateResult is_estimate(const SumProblem& problem, double theta, std::uint64_t samples,
                           std::uint64_t seed, const EstimatorOptions& options) {
  if (!(theta >= 0.0 && theta < 1.0)) {
    throw DomainError(fmt::format("is_estimate: theta must lie in [0, 1) (got {})", theta));
  }
  return run(problem, theta, samples, seed, Method::HazardTwistIS, options);
}

double relative_error_naive(double alpha_hat_is, std::uint64_t samples_naive, const ConfidenceConfig& cfg) {
  if (!(alpha_hat_is > 0.0 && alpha_hat_is < 1.0)) {
    throw UndefinedMetric("naive relative error needs an estimate strictly inside (0, 1)");
  }
  if (samples_naive == 0) {
    throw UndefinedMetric("naive relative error needs a positive sample count");
  }
  return cfg.confidence_constant * std::sqrt(alpha_hat_is * (1.0 - alpha_hat_is)) /
         (std::sqrt(static_cast<double>(samples_naive)) * alpha_hat_is);
}

double relative_error_is(const EstimateResult& result, const ConfidenceConfig& cfg) {
  if (!(result.alpha_hat > 0.0)) {
    throw UndefinedMetric("IS relative error is undefined for a zero estimate");
  }
  return cfg.confidence_constant * std::sqrt(result.variance_T) /
         (std::sqrt(static_cast<double>(result.sample_count)) * result.alpha_hat);
}

double efficiency_indicator(double alpha_hat_is, double variance_T) {
  if (variance_T < 0.0 || std::isnan(variance_T)) {
    throw UndefinedMetric("efficiency indicator needs a nonnegative variance");
  }
  if (variance_T == 0.0) {
    return std::numeric_limits<double>::infinity();
  }
  return alpha_hat_is * (1.0 - alpha_hat_is) / variance_T;
}

double optimality_ratio(double second_moment_T, double alpha_hat) {
  if (!(alpha_hat > 0.0 && alpha_hat < 1.0) || !(second_moment_T > 0.0)) {
    throw UndefinedMetric("optimality ratio needs 0 < alpha < 1 and a positive second moment");
  }
  return std::log(second_moment_T) / std::log(alpha_hat);
}

}  // namespace hrt
