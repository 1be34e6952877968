#pragma once

#include <cstdint>

#include "dcstop/normal.hpp"

namespace dcstop {

/// Counter-based random stream keyed by (seed, substream).
///
/// The state is the splitmix64 finalizer applied to a per-substream key, so
/// any substream can be opened in O(1) without touching the others. Samplers
/// and path simulators open substream i for sample i, which makes every
/// statistic independent of the thread schedule.
class CounterRng {
public:
    CounterRng(std::uint64_t seed, std::uint64_t substream) {
        state_ = mix(seed ^ mix(substream + 0x9E3779B97F4A7C15ULL));
    }

    std::uint64_t next_u64() {
        state_ += 0x9E3779B97F4A7C15ULL;
        return mix(state_);
    }

    /// Uniform on (0,1): 53-bit mantissa, offset so 0 is never returned.
    double uniform() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

    /// Standard normal via the inverse CDF (unpolished path; see normal.hpp).
    double normal() { return inverse_normal_cdf_unpolished(uniform()); }

private:
    static std::uint64_t mix(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    std::uint64_t state_;
};

} // namespace dcstop
