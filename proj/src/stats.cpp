#include "dcstop/stats.hpp"

#include <boost/math/distributions/chi_squared.hpp>
#include <cmath>

#include "dcstop/errors.hpp"

namespace dcstop {

double compensated_sum(std::span<const double> xs) {
    double sum = 0.0;
    double c = 0.0;
    for (double x : xs) {
        const double y = x - c;
        const double t = sum + y;
        c = (t - sum) - y;
        sum = t;
    }
    return sum;
}

double sample_mean(std::span<const double> xs) {
    if (xs.empty()) throw Error(ErrorCode::InsufficientSamples, "mean of empty sample");
    return compensated_sum(xs) / static_cast<double>(xs.size());
}

double sample_variance(std::span<const double> xs) {
    if (xs.size() < 2) throw Error(ErrorCode::InsufficientSamples, "variance needs n >= 2");
    const double m = sample_mean(xs);
    double sum = 0.0;
    double c = 0.0;
    for (double x : xs) {
        const double d = (x - m) * (x - m);
        const double y = d - c;
        const double t = sum + y;
        c = (t - sum) - y;
        sum = t;
    }
    return sum / static_cast<double>(xs.size() - 1);
}

double sample_correlation(std::span<const double> xs, std::span<const double> ys) {
    if (xs.size() != ys.size() || xs.size() < 2) {
        throw Error(ErrorCode::InsufficientSamples, "correlation needs paired samples");
    }
    const double mx = sample_mean(xs);
    const double my = sample_mean(ys);
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double dx = xs[i] - mx;
        const double dy = ys[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    return sxy / std::sqrt(sxx * syy);
}

double chi_squared_statistic(std::span<const std::size_t> observed,
                             std::span<const double> expected) {
    if (observed.size() != expected.size() || observed.empty()) {
        throw Error(ErrorCode::InsufficientSamples, "chi-squared needs matching cells");
    }
    double stat = 0.0;
    for (std::size_t i = 0; i < observed.size(); ++i) {
        if (expected[i] <= 0.0) {
            throw Error(ErrorCode::DomainError, "expected cell counts must be positive");
        }
        const double d = static_cast<double>(observed[i]) - expected[i];
        stat += d * d / expected[i];
    }
    return stat;
}

double chi_squared_upper_quantile(std::size_t df, double alpha) {
    boost::math::chi_squared dist(static_cast<double>(df));
    return boost::math::quantile(boost::math::complement(dist, alpha));
}

bool chi_squared_test_passes(std::span<const std::size_t> observed,
                             std::span<const double> expected, double significance) {
    const double stat = chi_squared_statistic(observed, expected);
    return stat <= chi_squared_upper_quantile(observed.size() - 1, significance);
}

} // namespace dcstop
