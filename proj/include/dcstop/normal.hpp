#pragma once

namespace dcstop {

/// Standard normal density.
double normal_pdf(double x);

/// Standard normal CDF, evaluated through erfc for full-tail accuracy.
double normal_cdf(double x);

/// Inverse standard normal CDF.
///
/// Rational approximation (Acklam) followed by one Halley polish step
/// against normal_cdf; absolute error is below 1e-13 over (1e-300, 1-1e-16),
/// comfortably inside the 1e-9 contract used by the threshold constructions.
/// Throws Error{DomainError} for p outside (0, 1).
double inverse_normal_cdf(double p);

/// Acklam's raw rational approximation, no polish step. Relative error is
/// below 1.2e-9, sufficient for Monte Carlo increments where evaluation cost
/// dominates; anything entering a probability claim uses inverse_normal_cdf.
double inverse_normal_cdf_unpolished(double p);

} // namespace dcstop
