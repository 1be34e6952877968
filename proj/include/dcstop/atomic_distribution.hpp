#pragma once

#include <cstddef>
#include <vector>

namespace dcstop {

/// Target stopping law: a finite sum of point masses p_k at times t_k,
/// with 0 < t_1 < ... < t_r and weights summing to one.
struct AtomicDistribution {
    std::vector<double> times;
    std::vector<double> weights;

    std::size_t atom_count() const { return times.size(); }

    /// Stage gap t_k - t_{k-1}, with t_0 = 0 (k is 1-based).
    double stage_gap(std::size_t k) const {
        return k == 1 ? times[0] : times[k - 1] - times[k - 2];
    }

    /// Tail mass p_k + ... + p_r (k is 1-based).
    double tail_mass(std::size_t k) const;
};

/// Validates raw atoms and returns the normalized distribution.
///
/// Rejections: NonIncreasingTimes, NonPositiveTime, NonPositiveWeight,
/// WeightSumMismatch when |sum p - 1| > 1e-9. Weights passing the check are
/// rescaled so they sum to one exactly (to within one ulp of accumulation).
AtomicDistribution validate_distribution(const std::vector<double>& times,
                                         const std::vector<double>& weights);

/// Mean of the distribution, sum p_k t_k. Under the quadratic-variation
/// reading of the atoms this is the expected terminal quadratic variation.
double expected_qv(const AtomicDistribution& mu);

} // namespace dcstop
