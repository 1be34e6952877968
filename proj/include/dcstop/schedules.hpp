#pragma once

#include <cstdint>
#include <vector>

#include "dcstop/atomic_distribution.hpp"
#include "dcstop/rng.hpp"

namespace dcstop {

enum class ScheduleKind { GaussianIncrement, BridgeMax };

/// Stagewise threshold rule realizing a distribution-constrained stopping
/// time: stop at the first stage k < r whose driving statistic falls at or
/// below the threshold c_k, otherwise stop at t_r.
///
/// GaussianIncrement thresholds the Brownian increment over the stage,
///   c_k = sqrt(dt_k) PhiInv(p_k / (p_k + ... + p_r));
/// BridgeMax thresholds the scaled absolute maximum of the stage's Brownian
/// bridge, c_k = PhiBBInv(same ratio), which makes the stopping time
/// independent of (W_{t_1}, ..., W_{t_r}).
struct ThresholdSchedule {
    ScheduleKind kind = ScheduleKind::GaussianIncrement;
    AtomicDistribution mu;
    std::vector<double> thresholds;  // c_1..c_{r-1}
    std::vector<double> tail_ratios; // p_k / tail mass, k = 1..r-1
};

ThresholdSchedule gaussian_tail_thresholds(const AtomicDistribution& mu);
ThresholdSchedule bridge_max_thresholds(const AtomicDistribution& mu);

/// One realized stopping time with the statistics that decided it.
struct StopSample {
    std::size_t atom_index = 1; // 1..r
    double stop_time = 0.0;     // t_{atom_index}
    double terminal_x = 0.0;    // x0 + W at the stop
    std::vector<double> marks;  // decision statistics, stages 1..min(atom,r-1)
};

/// Raw uniforms behind one draw: u_stats drive the stop decision in
/// quantile space (stage k stops iff u_k <= tail ratio), u_path the Brownian
/// increments of the X path. For the Gaussian-increment schedule the
/// decision and the increment share the same uniform, which is what makes it
/// a left-tail construction.
struct ScheduleDraw {
    std::vector<double> u_stats;   // r-1 entries
    std::vector<double> u_path;    // r entries (BridgeMax only; empty otherwise)
};

ScheduleDraw draw_schedule_uniforms(const ThresholdSchedule& schedule, CounterRng& rng);

/// Stage the draw stops at (1..r).
std::size_t classify_draw(const ThresholdSchedule& schedule, const ScheduleDraw& draw);

/// Realizes the stop sample for a draw, including the X path up to the stop.
StopSample realize_sample(const ThresholdSchedule& schedule, const ScheduleDraw& draw, double x0);

/// Convenience: draw + classify + realize with substream (seed, index).
StopSample sample_stopping_time(const ThresholdSchedule& schedule, double x0, CounterRng& rng);

} // namespace dcstop
