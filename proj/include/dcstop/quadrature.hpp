#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace dcstop {

/// Gauss-Hermite rule for the weight exp(-x^2) on the real line.
/// Exact for polynomials up to degree 2n-1.
class GaussHermiteRule {
public:
    explicit GaussHermiteRule(std::size_t n = 64);

    std::size_t size() const { return nodes_.size(); }
    const std::vector<double>& nodes() const { return nodes_; }
    const std::vector<double>& weights() const { return weights_; }

    /// E[g(x + sigma Z)] with Z standard normal.
    double gaussian_expectation(const std::function<double(double)>& g, double x,
                                double sigma) const;

private:
    std::vector<double> nodes_;
    std::vector<double> weights_;
};

/// Gauss-Legendre nodes/weights on [-1, 1].
struct GaussLegendreRule {
    explicit GaussLegendreRule(std::size_t n);
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// E[g(x + sigma Z)] by composite Gauss-Legendre panels against the normal
/// density, the panel edges split at the given z-breakpoints. Kink-aware:
/// place the payoff kinks on panel edges and each panel integrand is smooth,
/// so the result is good to ~1e-13 for piecewise-linear g. Uses only exp()
/// internally, independent of the error-function identities it validates.
double gaussian_expectation_panels(const std::function<double(double)>& g, double x, double sigma,
                                   const std::vector<double>& z_breakpoints = {},
                                   double z_max = 12.0, double panel_width = 1.0,
                                   std::size_t nodes_per_panel = 24);

} // namespace dcstop
