#pragma once

namespace dcstop {

/// CDF of the absolute maximum of a standard Brownian bridge on [0,1]:
///
///   P[max |B| <= m] = 1 + 2 sum_{j>=1} (-1)^j exp(-2 j^2 m^2),
///
/// the series truncated once a term drops below 1e-14 in magnitude.
/// Throws Error{DomainError} for m < 0.
double bridge_max_cdf(double m);

/// Inverse of bridge_max_cdf by bisection, |cdf(c) - q| < 1e-12.
/// Throws Error{DomainError} for q outside (0,1).
double bridge_max_cdf_inv(double q);

} // namespace dcstop
