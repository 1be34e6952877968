#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace dcstop {

/// Kahan-compensated sum; deterministic for a fixed element order.
double compensated_sum(std::span<const double> xs);

double sample_mean(std::span<const double> xs);

/// Unbiased sample variance (n-1 denominator).
double sample_variance(std::span<const double> xs);

double sample_correlation(std::span<const double> xs, std::span<const double> ys);

/// Pearson chi-squared statistic against expected counts.
double chi_squared_statistic(std::span<const std::size_t> observed,
                             std::span<const double> expected);

/// Upper quantile of the chi-squared distribution with df degrees of freedom:
/// the x with P[X > x] = alpha.
double chi_squared_upper_quantile(std::size_t df, double alpha);

/// Goodness-of-fit accept/reject at the given significance level.
bool chi_squared_test_passes(std::span<const std::size_t> observed,
                             std::span<const double> expected, double significance);

} // namespace dcstop
