#include "dcstop/schedules.hpp"

#include <cmath>

#include "dcstop/bridge_max.hpp"
#include "dcstop/errors.hpp"
#include "dcstop/normal.hpp"

namespace dcstop {

namespace {

std::vector<double> stage_ratios(const AtomicDistribution& mu) {
    const std::size_t r = mu.atom_count();
    std::vector<double> ratios(r > 0 ? r - 1 : 0);
    double tail = 1.0;
    for (std::size_t k = 1; k < r; ++k) {
        ratios[k - 1] = mu.weights[k - 1] / tail;
        tail -= mu.weights[k - 1];
    }
    return ratios;
}

} // namespace

ThresholdSchedule gaussian_tail_thresholds(const AtomicDistribution& mu) {
    ThresholdSchedule s;
    s.kind = ScheduleKind::GaussianIncrement;
    s.mu = mu;
    s.tail_ratios = stage_ratios(mu);
    s.thresholds.resize(s.tail_ratios.size());
    for (std::size_t k = 0; k < s.thresholds.size(); ++k) {
        s.thresholds[k] = std::sqrt(mu.stage_gap(k + 1)) * inverse_normal_cdf(s.tail_ratios[k]);
    }
    return s;
}

ThresholdSchedule bridge_max_thresholds(const AtomicDistribution& mu) {
    ThresholdSchedule s;
    s.kind = ScheduleKind::BridgeMax;
    s.mu = mu;
    s.tail_ratios = stage_ratios(mu);
    s.thresholds.resize(s.tail_ratios.size());
    for (std::size_t k = 0; k < s.thresholds.size(); ++k) {
        s.thresholds[k] = bridge_max_cdf_inv(s.tail_ratios[k]);
    }
    return s;
}

ScheduleDraw draw_schedule_uniforms(const ThresholdSchedule& schedule, CounterRng& rng) {
    const std::size_t r = schedule.mu.atom_count();
    ScheduleDraw d;
    d.u_stats.resize(r - 1);
    for (double& u : d.u_stats) u = rng.uniform();
    // GaussianIncrement reuses the decision uniforms as the first r-1 path
    // increments (the construction stops on left-tail increments); only the
    // last stage needs a fresh one. BridgeMax decisions are independent of
    // the path, so every increment gets its own uniform.
    d.u_path.resize(schedule.kind == ScheduleKind::GaussianIncrement ? 1 : r);
    for (double& u : d.u_path) u = rng.uniform();
    return d;
}

std::size_t classify_draw(const ThresholdSchedule& schedule, const ScheduleDraw& draw) {
    const std::size_t r = schedule.mu.atom_count();
    for (std::size_t k = 1; k < r; ++k) {
        if (draw.u_stats[k - 1] <= schedule.tail_ratios[k - 1]) return k;
    }
    return r;
}

StopSample realize_sample(const ThresholdSchedule& schedule, const ScheduleDraw& draw, double x0) {
    const std::size_t r = schedule.mu.atom_count();
    const std::size_t atom = classify_draw(schedule, draw);

    StopSample s;
    s.atom_index = atom;
    s.stop_time = schedule.mu.times[atom - 1];

    const std::size_t mark_count = r == 1 ? 0 : std::min(atom, r - 1);
    s.marks.resize(mark_count);
    for (std::size_t k = 0; k < mark_count; ++k) {
        s.marks[k] = schedule.kind == ScheduleKind::GaussianIncrement
                         ? std::sqrt(schedule.mu.stage_gap(k + 1)) *
                               inverse_normal_cdf(draw.u_stats[k])
                         : bridge_max_cdf_inv(draw.u_stats[k]);
    }

    double w = 0.0;
    for (std::size_t k = 1; k <= atom; ++k) {
        const double scale = std::sqrt(schedule.mu.stage_gap(k));
        double u;
        if (schedule.kind == ScheduleKind::GaussianIncrement) {
            u = k < r ? draw.u_stats[k - 1] : draw.u_path[0];
        } else {
            u = draw.u_path[k - 1];
        }
        w += scale * inverse_normal_cdf(u);
    }
    s.terminal_x = x0 + w;
    return s;
}

StopSample sample_stopping_time(const ThresholdSchedule& schedule, double x0, CounterRng& rng) {
    const ScheduleDraw draw = draw_schedule_uniforms(schedule, rng);
    return realize_sample(schedule, draw, x0);
}

} // namespace dcstop
