#include "dcstop/quadrature.hpp"

#include <algorithm>
#include <cmath>

#include "dcstop/errors.hpp"

namespace dcstop {

namespace {
constexpr double kSqrtPi = 1.7724538509055160;
constexpr double kSqrt2Pi = 2.5066282746310002;
} // namespace

GaussHermiteRule::GaussHermiteRule(std::size_t n) {
    if (n < 1) throw Error(ErrorCode::ConfigError, "quadrature rule needs n >= 1");
    nodes_.assign(n, 0.0);
    weights_.assign(n, 0.0);

    // Newton iteration on the orthonormal Hermite recurrence, roots found
    // from the largest down; symmetry fills the lower half.
    const std::size_t half = (n + 1) / 2;
    double z = 0.0;
    double z_prev = 0.0;
    double z_prev2 = 0.0;
    for (std::size_t i = 0; i < half; ++i) {
        const auto dn = static_cast<double>(n);
        if (i == 0) {
            z = std::sqrt(2.0 * dn + 1.0) - 1.85575 * std::pow(2.0 * dn + 1.0, -1.0 / 6.0);
        } else if (i == 1) {
            z -= 1.14 * std::pow(dn, 0.426) / z;
        } else if (i == 2) {
            z = 1.86 * z_prev - 0.86 * z_prev2;
        } else {
            z = 2.0 * z_prev - z_prev2;
        }
        double pp = 0.0;
        for (int iter = 0; iter < 200; ++iter) {
            double p1 = 0.7511255444649425; // pi^{-1/4}
            double p2 = 0.0;
            for (std::size_t j = 1; j <= n; ++j) {
                const double p3 = p2;
                p2 = p1;
                const auto dj = static_cast<double>(j);
                p1 = z * std::sqrt(2.0 / dj) * p2 - std::sqrt((dj - 1.0) / dj) * p3;
            }
            pp = std::sqrt(2.0 * dn) * p2;
            const double dz = p1 / pp;
            z -= dz;
            if (std::abs(dz) <= 1e-15 * std::max(1.0, std::abs(z))) break;
        }
        nodes_[i] = z;
        nodes_[n - 1 - i] = -z;
        weights_[i] = 2.0 / (pp * pp);
        weights_[n - 1 - i] = weights_[i];
        z_prev2 = z_prev;
        z_prev = z;
    }
    std::reverse(nodes_.begin(), nodes_.end()); // ascending
    std::reverse(weights_.begin(), weights_.end());
}

double GaussHermiteRule::gaussian_expectation(const std::function<double(double)>& g, double x,
                                              double sigma) const {
    const double scale = sigma * std::sqrt(2.0);
    double acc = 0.0;
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        acc += weights_[i] * g(x + scale * nodes_[i]);
    }
    return acc / kSqrtPi;
}

GaussLegendreRule::GaussLegendreRule(std::size_t n) {
    nodes.assign(n, 0.0);
    weights.assign(n, 0.0);
    const std::size_t half = (n + 1) / 2;
    for (std::size_t i = 0; i < half; ++i) {
        double z = std::cos(M_PI * (static_cast<double>(i) + 0.75) /
                            (static_cast<double>(n) + 0.5));
        double pp = 0.0;
        for (int iter = 0; iter < 200; ++iter) {
            double p1 = 1.0;
            double p2 = 0.0;
            for (std::size_t j = 1; j <= n; ++j) {
                const double p3 = p2;
                p2 = p1;
                const auto dj = static_cast<double>(j);
                p1 = ((2.0 * dj - 1.0) * z * p2 - (dj - 1.0) * p3) / dj;
            }
            pp = static_cast<double>(n) * (z * p1 - p2) / (z * z - 1.0);
            const double dz = p1 / pp;
            z -= dz;
            if (std::abs(dz) <= 1e-15) break;
        }
        nodes[i] = -z;
        nodes[n - 1 - i] = z;
        weights[i] = 2.0 / ((1.0 - z * z) * pp * pp);
        weights[n - 1 - i] = weights[i];
    }
}

double gaussian_expectation_panels(const std::function<double(double)>& g, double x, double sigma,
                                   const std::vector<double>& z_breakpoints, double z_max,
                                   double panel_width, std::size_t nodes_per_panel) {
    static const GaussLegendreRule rule24(24);
    const GaussLegendreRule local = nodes_per_panel == 24 ? rule24 : GaussLegendreRule(nodes_per_panel);

    std::vector<double> edges;
    edges.push_back(-z_max);
    for (double e = -z_max + panel_width; e < z_max - 0.5 * panel_width; e += panel_width) {
        edges.push_back(e);
    }
    edges.push_back(z_max);
    for (double b : z_breakpoints) {
        if (b > -z_max && b < z_max) edges.push_back(b);
    }
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end(),
                            [](double a, double b) { return std::abs(a - b) < 1e-13; }),
                edges.end());

    double acc = 0.0;
    for (std::size_t p = 0; p + 1 < edges.size(); ++p) {
        const double a = edges[p];
        const double b = edges[p + 1];
        const double mid = 0.5 * (a + b);
        const double rad = 0.5 * (b - a);
        double panel = 0.0;
        for (std::size_t i = 0; i < local.nodes.size(); ++i) {
            const double z = mid + rad * local.nodes[i];
            panel += local.weights[i] * g(x + sigma * z) * std::exp(-0.5 * z * z);
        }
        acc += panel * rad;
    }
    return acc / kSqrt2Pi;
}

} // namespace dcstop
