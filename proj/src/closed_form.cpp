#include "dcstop/closed_form.hpp"

#include <algorithm>
#include <cmath>

#include "dcstop/errors.hpp"
#include "dcstop/normal.hpp"
#include "dcstop/quadrature.hpp"

namespace dcstop {

namespace {

/// E[(d + W_t)^+] for standard Brownian motion, t > 0.
double kink_value(double d, double sqrt_t) {
    const double z = d / sqrt_t;
    return d * normal_cdf(z) + sqrt_t * normal_pdf(z);
}

} // namespace

double heat_value(const PayoffSpec& f, double t, double x) {
    if (t < 0.0) throw Error(ErrorCode::NegativeTime, "heat semigroup needs t >= 0");
    if (t == 0.0) return f(x);
    const double sqrt_t = std::sqrt(t);
    double v = f.affine_intercept() + f.affine_slope() * x;
    const auto& pos = f.kink_positions();
    const auto& jump = f.kink_jumps();
    for (std::size_t i = 0; i < pos.size(); ++i) {
        v += jump[i] * kink_value(x - pos[i], sqrt_t);
    }
    return v;
}

double heat_value_quadrature(const PayoffSpec& f, double t, double x) {
    if (t < 0.0) throw Error(ErrorCode::NegativeTime, "heat semigroup needs t >= 0");
    if (t == 0.0) return f(x);
    const double sigma = std::sqrt(t);
    std::vector<double> breaks;
    for (double k : f.kink_positions()) breaks.push_back((k - x) / sigma);
    return gaussian_expectation_panels([&](double s) { return f(s); }, x, sigma, breaks);
}

double mean_volatility_value(const PayoffSpec& f, const AtomicDistribution& mu, double x) {
    return heat_value(f, expected_qv(mu), x);
}

std::vector<double> heat_propagate_curve(const std::vector<double>& values, const XAxis& axis,
                                         double t) {
    if (t < 0.0) throw Error(ErrorCode::NegativeTime, "heat semigroup needs t >= 0");
    if (t == 0.0) return values;
    const std::size_t n = values.size();
    if (n < 2) throw Error(ErrorCode::ConfigError, "curve needs at least two nodes");

    // Kink form of the sampled curve: leftmost slope plus slope jumps at
    // interior nodes; the end slopes extend linearly beyond the axis.
    const double inv_dx = 1.0 / axis.dx;
    std::vector<double> jumps(n, 0.0);
    const double slope_left = (values[1] - values[0]) * inv_dx;
    for (std::size_t i = 1; i + 1 < n; ++i) {
        jumps[i] = (values[i + 1] - 2.0 * values[i] + values[i - 1]) * inv_dx;
    }
    const double intercept = values[0] - slope_left * axis.node(0);

    const double sqrt_t = std::sqrt(t);
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double xi = axis.node(i);
        double v = intercept + slope_left * xi;
        for (std::size_t j = 1; j + 1 < n; ++j) {
            if (jumps[j] != 0.0) v += jumps[j] * kink_value(xi - axis.node(j), sqrt_t);
        }
        out[i] = v;
    }
    return out;
}

std::vector<double> support_constrained_curve(const PayoffSpec& f, const AtomicDistribution& mu,
                                              const XAxis& axis) {
    const std::size_t r = mu.atom_count();
    std::vector<double> payoff(axis.n);
    for (std::size_t i = 0; i < axis.n; ++i) payoff[i] = f(axis.node(i));

    std::vector<double> v = payoff; // V_r = f at t_r
    for (std::size_t k = r; k >= 1; --k) {
        const double gap = mu.stage_gap(k);
        v = heat_propagate_curve(v, axis, gap);
        if (k > 1) {
            for (std::size_t i = 0; i < axis.n; ++i) v[i] = std::max(v[i], payoff[i]);
        }
    }
    return v;
}

double support_constrained_value(const PayoffSpec& f, const AtomicDistribution& mu, double x,
                                 double dx, double halfwidth_multiplier) {
    const double t_r = mu.times.back();
    const XAxis axis = XAxis::centered(x, halfwidth_multiplier * std::sqrt(t_r), dx);
    const std::vector<double> curve = support_constrained_curve(f, mu, axis);
    return curve[axis.nearest(x)];
}

} // namespace dcstop
