#pragma once

#include <vector>

#include "dcstop/atomic_distribution.hpp"
#include "dcstop/grid.hpp"
#include "dcstop/payoff.hpp"

namespace dcstop {

/// E[f(x + W_t)] for the heat semigroup acting on a piecewise-linear payoff,
/// computed exactly through the Gaussian kink identity
///   E[(x + W_t - K)^+] = (x-K) Phi((x-K)/sqrt(t)) + sqrt(t) phi((x-K)/sqrt(t)).
/// Throws Error{NegativeTime} for t < 0; t = 0 returns f(x).
double heat_value(const PayoffSpec& f, double t, double x);

/// Validation route for heat_value: kink-split panel quadrature, sharing no
/// code with the error-function identities.
double heat_value_quadrature(const PayoffSpec& f, double t, double x);

/// Value when the quadratic variation is pinned at the mean of the outlook:
/// heat_value(f, expected_qv(mu), x).
double mean_volatility_value(const PayoffSpec& f, const AtomicDistribution& mu, double x);

/// Bermudan value over exercise dates {t_1..t_r}: the upper comparison where
/// only the support of the outlook constrains the stopping time. Backward
/// induction on the given axis; each continuation is propagated in closed
/// form treating the sampled curve as piecewise linear between nodes.
std::vector<double> support_constrained_curve(const PayoffSpec& f, const AtomicDistribution& mu,
                                              const XAxis& axis);

/// Scalar convenience: runs the induction on an internal axis centered at x.
double support_constrained_value(const PayoffSpec& f, const AtomicDistribution& mu, double x,
                                 double dx = 0.05, double halfwidth_multiplier = 6.0);

/// Propagates a grid-sampled curve by the heat semigroup over duration t,
/// treating it as piecewise linear with one-sided end slopes extended.
std::vector<double> heat_propagate_curve(const std::vector<double>& values, const XAxis& axis,
                                         double t);

} // namespace dcstop
