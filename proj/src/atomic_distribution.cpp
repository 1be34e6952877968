#include "dcstop/atomic_distribution.hpp"

#include <cmath>

#include "dcstop/errors.hpp"

namespace dcstop {

double AtomicDistribution::tail_mass(std::size_t k) const {
    double s = 0.0;
    for (std::size_t j = weights.size(); j >= k; --j) s += weights[j - 1];
    return s;
}

AtomicDistribution validate_distribution(const std::vector<double>& times,
                                         const std::vector<double>& weights) {
    if (times.empty() || times.size() != weights.size()) {
        throw Error(ErrorCode::ConfigError, "need equal-length nonempty times and weights");
    }
    double prev = 0.0;
    for (double t : times) {
        if (!(t > 0.0)) throw Error(ErrorCode::NonPositiveTime, "atom times must be positive");
        if (!(t > prev)) throw Error(ErrorCode::NonIncreasingTimes, "atom times must increase");
        prev = t;
    }
    double sum = 0.0;
    for (double p : weights) {
        if (!(p > 0.0)) throw Error(ErrorCode::NonPositiveWeight, "atom weights must be positive");
        sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-9) {
        throw Error(ErrorCode::WeightSumMismatch, "atom weights must sum to 1");
    }
    AtomicDistribution mu{times, weights};
    for (double& p : mu.weights) p /= sum;
    return mu;
}

double expected_qv(const AtomicDistribution& mu) {
    double s = 0.0;
    for (std::size_t k = 0; k < mu.atom_count(); ++k) s += mu.weights[k] * mu.times[k];
    return s;
}

} // namespace dcstop
