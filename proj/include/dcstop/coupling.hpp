#pragma once

#include <span>
#include <vector>

#include "dcstop/schedules.hpp"

namespace dcstop {

/// Half-open axis-aligned box (lo, hi] in quantile space.
struct QuantileBox {
    std::vector<double> lo;
    std::vector<double> hi;

    double volume() const;
    bool contains(std::span<const double> u) const;
};

/// Disjoint union of boxes. Stage events of the threshold constructions are
/// finite unions of boxes in the joint quantile space of the stage
/// statistics, which keeps every probability in the coupling exact.
class QuantileBoxSet {
public:
    static QuantileBoxSet unit(std::size_t dim);
    static QuantileBoxSet of(QuantileBox box);

    void subtract(const QuantileBox& cut);
    void subtract(const QuantileBoxSet& cuts);
    void unite_disjoint(const QuantileBoxSet& other);
    void clip_above(std::size_t dim, double g); // intersect with {u_dim > g}

    double volume() const;
    double intersection_volume(const QuantileBoxSet& other) const;
    bool contains(std::span<const double> u) const;
    const std::vector<QuantileBox>& boxes() const { return boxes_; }

private:
    std::vector<QuantileBox> boxes_;
};

/// Stagewise coupling of two stopping laws on the same atoms and the same
/// driving noise. Stage events for the perturbed weights are built from the
/// original ones by thresholding the stage statistic at a quantile, keeping
/// the nested inclusion that drives the 4^r ||p - p'||_1 mismatch bound.
struct CoupledConstruction {
    ThresholdSchedule base;
    std::vector<double> p_prime;
    std::vector<QuantileBoxSet> prime_events; // A'_1..A'_r
    double mismatch_probability = 0.0;        // exact P[tau != tau']
    std::vector<double> stage_symdiff;        // exact P[A_k symdiff A'_k]
};

/// Throws Error{WeightMismatch} when p' is not a weight vector of the same
/// length (entries in [0,1], summing to 1 within 1e-9).
CoupledConstruction couple_stopping_time(const ThresholdSchedule& schedule,
                                         const std::vector<double>& p_prime);

struct CoupledSample {
    StopSample tau;
    StopSample tau_prime;
};

CoupledSample sample_coupled(const CoupledConstruction& coupling, double x0, CounterRng& rng);

/// 4^r ||p - p'||_1.
double coupling_bound(const AtomicDistribution& mu, const std::vector<double>& p_prime);

} // namespace dcstop
