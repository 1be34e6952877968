#pragma once

#include <cstdint>
#include <vector>

#include "dcstop/hjb.hpp"
#include "dcstop/rng.hpp"

namespace dcstop {

enum class ResolveMode { Bernoulli, AdaptedBridge };

/// Control source for the simulation: the solved argmax field, a forced
/// zero control (stops become independent randomizations), or the argmax
/// halved (a deliberately suboptimal perturbation).
enum class PolicyMode { Optimal, Zero, Half };

struct McConfig {
    std::size_t paths = 100000;
    std::uint64_t seed = 20200517;
    std::size_t bins = 81;
    ResolveMode resolve = ResolveMode::Bernoulli;
    PolicyMode policy_mode = PolicyMode::Optimal;
    double dt = 0.0;                  // 0: reuse the solver's stage steps
    std::size_t bridge_substeps = 16; // AdaptedBridge sub-grid
    std::size_t threads = 0;
};

/// Simulated (X, Y) trajectories with realized stops. Per-path storage keeps
/// every reduction a deterministic fixed-order sum.
struct PathEnsemble {
    std::size_t path_count = 0;
    std::uint64_t seed = 0;
    AtomicDistribution mu;
    double x0 = 0.0;
    std::vector<std::uint32_t> stop_atom; // 1..r
    std::vector<double> stop_x;           // X at the stop
    std::vector<double> payoff;
    /// Stop coordinate q = Y^(k) observed at each stage boundary the path
    /// reached, NaN afterwards; layout [path * (r-1) + (k-1)].
    std::vector<double> boundary_q;
    /// Increment of the sampled value surface across stage k (checkpoint at
    /// t_k minus checkpoint at t_{k-1}), NaN when the path had stopped;
    /// layout [path * r + (k-1)].
    std::vector<double> value_increments;
    double clamp_fraction = 0.0; // steps whose simplex clamp moved Y by > 1e-6
    std::size_t total_steps = 0;

    double stop_time(std::size_t path) const { return mu.times[stop_atom[path] - 1]; }
};

/// Stop resolution at a stage boundary: stop with probability exactly q.
/// Bernoulli consumes one uniform. AdaptedBridge realizes the same law by
/// simulating a Brownian-bridge sub-grid, thresholding its absolute maximum
/// at the q-quantile with exact piecewise barrier-crossing corrections.
/// Throws Error{QOutOfRange} when q is outside [0,1] beyond 1e-6.
bool resolve_stop(double q, CounterRng& rng, ResolveMode mode, std::size_t bridge_substeps = 16);

/// Euler simulation of the controlled pair dX = dW, dY = alpha dW under the
/// solved policy, with stage-boundary stop resolution and perspective-map
/// renormalization of survivors. Throws Error{MissingPolicy} when the solve
/// carried no stored policies (unless policy_mode == Zero).
PathEnsemble simulate_paths(const SolveResult& solve, const PayoffSpec& f, const McConfig& cfg);

struct DensityEstimate {
    double atom_time = 0.0;
    std::vector<double> bin_edges; // size bins + 1
    std::vector<std::size_t> counts;
    std::vector<double> density;  // normalized over the in-range counts
    double stage_mass = 0.0;      // unconditional P[tau = t_k]
    std::size_t stopped_paths = 0;
};

/// Histogram density of X at t_k conditional on stopping there.
/// Throws Error{InsufficientSamples} below 100 stopped paths.
DensityEstimate conditional_density(const PathEnsemble& ensemble, std::size_t atom,
                                    std::size_t bins);

struct McAtomStat {
    double expected_mass = 0.0;
    double empirical_mass = 0.0;
    double standard_error = 0.0;
    double stop_x_mean = 0.0;
    double stop_x_var = 0.0;
};

struct McReport {
    std::vector<McAtomStat> masses;
    bool masses_ok = true; // each within 3 standard errors

    double mean_payoff = 0.0;
    double payoff_se = 0.0;
    double v_star = 0.0;
    bool payoff_ok = true; // |gap| <= max(1% v_star, 4 se)

    std::vector<double> martingale_mean; // per stage
    std::vector<double> martingale_se;
    bool martingale_ok = true; // each |mean| <= 3 se

    double clamp_fraction = 0.0;
    bool clamp_ok = true; // < 1%

    bool all_ok() const { return masses_ok && payoff_ok && martingale_ok && clamp_ok; }
};

McReport mc_report(const PathEnsemble& ensemble, const SolveResult& solve);

} // namespace dcstop
