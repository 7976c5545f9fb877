#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hrt/problem.hpp"

namespace hrt {

enum class Method { Naive, HazardTwistIS };

std::string to_string(Method method);

struct ConfidenceConfig {
  double confidence_constant = 1.96;
};

/// Per-sample record, kept only when EstimatorOptions::retain_samples is set.
struct SampleRecord {
  double sum;             // S_N
  double log_likelihood;  // -N log(1 - theta) - theta * sum_i Lambda_i(X_i)
  bool hit;               // S_N > gamma
};

struct EstimatorOptions {
  unsigned workers = 0;  // 0: hardware concurrency
  bool retain_samples = false;
  ConfidenceConfig confidence{};
};

struct EstimateResult {
  Method method = Method::Naive;
  double alpha_hat = 0.0;
  std::uint64_t sample_count = 0;
  std::uint64_t hit_frequency = 0;
  double mean_T = 0.0;
  double second_moment_T = 0.0;
  double variance_T = 0.0;  // unbiased, divisor M - 1
  double standard_error = 0.0;
  double relative_error = 0.0;  // +inf when alpha_hat == 0
  /// Standard error of second_moment_T as an estimate of E[T^2].
  double second_moment_std_error = 0.0;
  /// Largest log likelihood ratio over samples with S_N > gamma (-inf when there are none).
  double max_log_likelihood_hit = 0.0;
  std::uint64_t saturated_samples = 0;
  std::uint64_t seed = 0;
  double theta_used = 0.0;
  double duration_seconds = 0.0;
  std::vector<SampleRecord> samples;
};

/// Crude Monte Carlo: fraction of M base-law samples with S_N > gamma.
EstimateResult naive_mc(const SumProblem& problem, std::uint64_t samples, std::uint64_t seed,
                        const EstimatorOptions& options = {});

/// Hazard-rate-twisting importance sampling. Each component is sampled from its
/// theta-twisted law by inversion and the sample contributes
///   T = (1 - theta)^(-N) exp(-theta sum_i Lambda_i(X_i)) 1{S_N > gamma}.
///
/// Sample j, component i draws from RandomStream(seed, j*N + i). Samples are
/// accumulated in fixed-size blocks merged in block order, so the result is
/// bit-identical for any worker count.
EstimateResult is_estimate(const SumProblem& problem, double theta, std::uint64_t samples,
                           std::uint64_t seed, const EstimatorOptions& options = {});

/// C sqrt(a(1-a)) / (sqrt(M_MC) a), with a the IS estimate.
double relative_error_naive(double alpha_hat_is, std::uint64_t samples_naive,
                            const ConfidenceConfig& cfg = {});

/// C sqrt(var T) / (sqrt(M) alpha_hat).
double relative_error_is(const EstimateResult& result, const ConfidenceConfig& cfg = {});

/// k = a(1-a) / var T. Returns +inf when var T == 0.
double efficiency_indicator(double alpha_hat_is, double variance_T);

/// log E[T^2] / log alpha_hat; 1 for crude Monte Carlo, 2 in the zero-variance limit.
double optimality_ratio(double second_moment_T, double alpha_hat);

}  // namespace hrt
