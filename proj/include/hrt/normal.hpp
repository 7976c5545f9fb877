#pragma once

// Standard normal density, distribution and tail functions with
// log-domain variants that stay finite far into the upper tail.

namespace hrt::normal {

inline constexpr double kSqrt2 = 1.41421356237309504880;
inline constexpr double kLogSqrt2Pi = 0.91893853320467274178;  // log(sqrt(2*pi))
inline constexpr double kInvSqrt2Pi = 0.39894228040143267794;

double phi(double z);
double log_phi(double z);

/// P(Z <= z).
double Phi(double z);

/// P(Z > z). Uses erfc up to z = 8 and the Mills-ratio continued fraction beyond.
double Phi_bar(double z);

/// log P(Z > z), finite for every finite z.
double log_Phi_bar(double z);

/// Mills ratio P(Z > z) / phi(z) for z >= 0.
double mills_ratio(double z);

/// Inverse of Phi on (0, 1).
double Phi_inv(double u);

/// Solves log_Phi_bar(z) = log_q for z, for any log_q < 0.
double Phi_bar_inv_log(double log_q);

}  // namespace hrt::normal
