#include "dcstop/mc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "dcstop/bridge_max.hpp"
#include "dcstop/errors.hpp"
#include "dcstop/parallel.hpp"
#include "dcstop/stats.hpp"

namespace dcstop {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

/// Survival probability of a pinned Brownian piece between barriers +-c:
/// bridge from a to b over duration s, |a|,|b| < c, by the method of images.
double barrier_survival(double a, double b, double c, double s) {
    const double w = b - a;
    const double upper = c - a;
    const double d = 2.0 * c;
    double p = 0.0;
    for (int n = -8; n <= 8; ++n) {
        const double nd = static_cast<double>(n) * d;
        p += std::exp(-2.0 * nd * (nd - w) / s);
        p -= std::exp(-2.0 * (upper - nd) * (upper - nd - w) / s);
    }
    return std::clamp(p, 0.0, 1.0);
}

/// Nearest lattice node for the free coordinates; m <= 2 fast paths.
std::size_t nearest_y_node(const SimplexLattice& lat, const double* y, std::size_t m) {
    const auto M = static_cast<long>(lat.subdivisions());
    if (m == 0) return 0;
    if (m == 1) {
        const long i = std::clamp(std::lround(y[0] * static_cast<double>(M)), 0L, M);
        return static_cast<std::size_t>(i);
    }
    if (m == 2) {
        long i = std::clamp(std::lround(y[0] * static_cast<double>(M)), 0L, M);
        long j = std::clamp(std::lround(y[1] * static_cast<double>(M)), 0L, M - i);
        return lat.row_offset(static_cast<std::size_t>(i)) + static_cast<std::size_t>(j);
    }
    std::vector<std::size_t> multi(m);
    long budget = M;
    for (std::size_t d = 0; d < m; ++d) {
        const long i = std::clamp(std::lround(y[d] * static_cast<double>(M)), 0L, budget);
        multi[d] = static_cast<std::size_t>(i);
        budget -= i;
    }
    return lat.flat_index(multi);
}

/// Componentwise clip to [0,1], then rescale if the free mass exceeds one.
/// Returns the largest coordinate move.
double clamp_to_simplex(double* y, std::size_t m) {
    double moved = 0.0;
    double sum = 0.0;
    for (std::size_t d = 0; d < m; ++d) {
        const double c = std::clamp(y[d], 0.0, 1.0);
        moved = std::max(moved, std::abs(c - y[d]));
        y[d] = c;
        sum += c;
    }
    if (sum > 1.0) {
        for (std::size_t d = 0; d < m; ++d) {
            const double c = y[d] / sum;
            moved = std::max(moved, std::abs(c - y[d]));
            y[d] = c;
        }
    }
    return moved;
}

} // namespace

bool resolve_stop(double q, CounterRng& rng, ResolveMode mode, std::size_t bridge_substeps) {
    if (q < -1e-6 || q > 1.0 + 1e-6) {
        throw Error(ErrorCode::QOutOfRange, "stop probability outside [0,1]");
    }
    q = std::clamp(q, 0.0, 1.0);
    if (mode == ResolveMode::Bernoulli) {
        return rng.uniform() <= q;
    }
    if (q <= 0.0) return false;
    if (q >= 1.0) return true;
    const double c = bridge_max_cdf_inv(q);
    const std::size_t S = std::max<std::size_t>(2, bridge_substeps);
    const double step = 1.0 / static_cast<double>(S);
    const double sqrt_step = std::sqrt(step);

    // Brownian skeleton, pinned into a bridge.
    std::vector<double> w(S + 1, 0.0);
    for (std::size_t j = 1; j <= S; ++j) w[j] = w[j - 1] + sqrt_step * rng.normal();
    const double w_end = w[S];
    double prev = 0.0;
    for (std::size_t j = 1; j <= S; ++j) {
        const double bridge = w[j] - static_cast<double>(j) * step * w_end;
        if (std::abs(bridge) > c) return false; // skeleton already exceeds the threshold
        // Exact correction for a crossing inside the sub-interval.
        const double survive = barrier_survival(prev, bridge, c, step);
        if (rng.uniform() > survive) return false;
        prev = bridge;
    }
    return true;
}

PathEnsemble simulate_paths(const SolveResult& solve, const PayoffSpec& f, const McConfig& cfg) {
    const AtomicDistribution& mu = solve.mu;
    const std::size_t r = mu.atom_count();
    const bool needs_policy = cfg.policy_mode != PolicyMode::Zero && r > 1;
    if (needs_policy && solve.policies.size() + 1 < r) {
        throw Error(ErrorCode::MissingPolicy, "solve carried no stored policy fields");
    }

    // Per-stage stepping: reuse the solver's stages unless a custom dt is set.
    std::vector<std::size_t> stage_steps(r);
    std::vector<double> stage_dt(r);
    for (std::size_t k = 1; k <= r; ++k) {
        const StageGrid& g = solve.stage_start[k - 1].grid;
        if (cfg.dt <= 0.0) {
            stage_steps[k - 1] = g.steps;
            stage_dt[k - 1] = g.dt;
        } else {
            const double gap = mu.stage_gap(k);
            auto steps = static_cast<std::size_t>(std::max(1L, std::lround(gap / cfg.dt)));
            if (gap / static_cast<double>(steps) > cfg.dt * (1.0 + 1e-9)) ++steps;
            stage_steps[k - 1] = steps;
            stage_dt[k - 1] = gap / static_cast<double>(steps);
        }
    }

    PathEnsemble ens;
    ens.path_count = cfg.paths;
    ens.seed = cfg.seed;
    ens.mu = mu;
    ens.x0 = solve.x0;
    ens.stop_atom.assign(cfg.paths, 0);
    ens.stop_x.assign(cfg.paths, 0.0);
    ens.payoff.assign(cfg.paths, 0.0);
    ens.boundary_q.assign(cfg.paths * std::max<std::size_t>(r - 1, 1), kNaN);
    ens.value_increments.assign(cfg.paths * r, kNaN);

    std::vector<std::size_t> clamp_counts(cfg.paths, 0);
    std::vector<std::size_t> step_counts(cfg.paths, 0);

    const double dy_over_dx = solve.stage_start[0].grid.y.subdivisions() > 0
                                  ? (1.0 / static_cast<double>(
                                         solve.stage_start[0].grid.y.subdivisions())) /
                                        solve.stage_start[0].grid.x.dx
                                  : 0.0;

    parallel_for_chunks(
        cfg.paths,
        [&](std::size_t begin, std::size_t end) {
            std::vector<double> y(std::max<std::size_t>(r - 1, 1), 0.0);
            std::vector<double> ynext(std::max<std::size_t>(r - 1, 1), 0.0);
            for (std::size_t p = begin; p < end; ++p) {
                CounterRng rng(cfg.seed, p);
                double x = solve.x0;
                const std::size_t m0 = r - 1;
                for (std::size_t d = 0; d < m0; ++d) y[d] = mu.weights[d];

                std::size_t atom = r;
                double checkpoint = solve.v_star;
                std::size_t clamped = 0;
                std::size_t steps_done = 0;

                for (std::size_t k = 1; k <= r; ++k) {
                    const std::size_t m = r - k;
                    const std::size_t n_steps = stage_steps[k - 1];
                    const double dt = stage_dt[k - 1];
                    const double sqrt_dt = std::sqrt(dt);
                    const StageGrid& grid = solve.stage_start[k - 1].grid;
                    const PolicyField* pol =
                        (k < r && cfg.policy_mode != PolicyMode::Zero) ? &solve.policies[k - 1]
                                                                       : nullptr;
                    const double solver_dt = grid.dt;

                    for (std::size_t s = 0; s < n_steps; ++s) {
                        const double z = rng.normal();
                        const double dw = sqrt_dt * z;
                        if (pol != nullptr && m > 0) {
                            const double t_off = static_cast<double>(s) * dt;
                            auto level = static_cast<std::size_t>(
                                std::min<double>(static_cast<double>(grid.steps - 1),
                                                 std::floor(t_off / solver_dt + 1e-12)));
                            const std::size_t ixn = grid.x.nearest(x);
                            const std::size_t iyn = nearest_y_node(grid.y, y.data(), m);
                            const auto kappa = pol->at(level, ixn, iyn);
                            const double scale =
                                cfg.policy_mode == PolicyMode::Half ? 0.5 : 1.0;
                            for (std::size_t d = 0; d < m; ++d) {
                                y[d] += scale * static_cast<double>(kappa[d]) * dy_over_dx * dw;
                            }
                            if (clamp_to_simplex(y.data(), m) > 1e-6) ++clamped;
                        }
                        x += dw;
                        ++steps_done;
                    }
                    if (!std::isfinite(x)) {
                        throw Error(ErrorCode::NonFinitePath, "path left the finite range");
                    }

                    // Stage boundary t_k.
                    if (k == r) {
                        atom = r;
                        ens.value_increments[p * r + (k - 1)] = f(x) - checkpoint;
                        break;
                    }
                    const double q = std::clamp(y[0], 0.0, 1.0);
                    ens.boundary_q[p * std::max<std::size_t>(r - 1, 1) + (k - 1)] = q;
                    const bool stopped =
                        resolve_stop(q, rng, cfg.resolve, cfg.bridge_substeps);
                    if (stopped) {
                        atom = k;
                        ens.value_increments[p * r + (k - 1)] = f(x) - checkpoint;
                        break;
                    }
                    // Survivor: renormalize through the perspective map.
                    const double denom = 1.0 - q;
                    const std::size_t m_next = m - 1;
                    for (std::size_t d = 0; d < m_next; ++d) {
                        ynext[d] = denom > 1e-300 ? y[d + 1] / denom : 0.0;
                    }
                    clamp_to_simplex(ynext.data(), m_next);
                    std::swap(y, ynext);

                    const double next_checkpoint =
                        solve.stage_start[k].interpolate(x, {y.data(), m_next});
                    ens.value_increments[p * r + (k - 1)] = next_checkpoint - checkpoint;
                    checkpoint = next_checkpoint;
                }

                ens.stop_atom[p] = static_cast<std::uint32_t>(atom);
                ens.stop_x[p] = x;
                ens.payoff[p] = f(x);
                clamp_counts[p] = clamped;
                step_counts[p] = steps_done;
            }
        },
        cfg.threads == 0 ? default_thread_count() : cfg.threads);

    std::size_t clamp_total = 0;
    std::size_t steps_total = 0;
    for (std::size_t p = 0; p < cfg.paths; ++p) {
        clamp_total += clamp_counts[p];
        steps_total += step_counts[p];
    }
    ens.total_steps = steps_total;
    ens.clamp_fraction =
        steps_total > 0 ? static_cast<double>(clamp_total) / static_cast<double>(steps_total) : 0.0;
    return ens;
}

DensityEstimate conditional_density(const PathEnsemble& ensemble, std::size_t atom,
                                    std::size_t bins) {
    if (atom < 1 || atom > ensemble.mu.atom_count()) {
        throw Error(ErrorCode::ConfigError, "atom index outside 1..r");
    }
    if (bins < 2) throw Error(ErrorCode::ConfigError, "need at least two bins");

    DensityEstimate est;
    est.atom_time = ensemble.mu.times[atom - 1];
    const double halfwidth = 4.0 * std::sqrt(est.atom_time);
    const double lo = ensemble.x0 - halfwidth;
    const double width = 2.0 * halfwidth / static_cast<double>(bins);
    est.bin_edges.resize(bins + 1);
    for (std::size_t b = 0; b <= bins; ++b) {
        est.bin_edges[b] = lo + width * static_cast<double>(b);
    }
    est.counts.assign(bins, 0);

    std::size_t stopped = 0;
    std::size_t in_range = 0;
    for (std::size_t p = 0; p < ensemble.path_count; ++p) {
        if (ensemble.stop_atom[p] != atom) continue;
        ++stopped;
        const double x = ensemble.stop_x[p];
        if (x < lo || x >= lo + width * static_cast<double>(bins)) continue;
        const auto b = static_cast<std::size_t>((x - lo) / width);
        ++est.counts[std::min(b, bins - 1)];
        ++in_range;
    }
    if (stopped < 100) {
        throw Error(ErrorCode::InsufficientSamples, "need at least 100 paths stopped at the atom");
    }
    est.stopped_paths = stopped;
    est.stage_mass = static_cast<double>(stopped) / static_cast<double>(ensemble.path_count);
    est.density.resize(bins);
    for (std::size_t b = 0; b < bins; ++b) {
        est.density[b] = in_range > 0 ? static_cast<double>(est.counts[b]) /
                                            (static_cast<double>(in_range) * width)
                                      : 0.0;
    }
    return est;
}

McReport mc_report(const PathEnsemble& ensemble, const SolveResult& solve) {
    const std::size_t r = ensemble.mu.atom_count();
    const auto n = static_cast<double>(ensemble.path_count);

    McReport rep;
    rep.v_star = solve.v_star;
    rep.clamp_fraction = ensemble.clamp_fraction;
    rep.clamp_ok = ensemble.clamp_fraction < 0.01;

    rep.masses.resize(r);
    for (std::size_t k = 1; k <= r; ++k) {
        McAtomStat& st = rep.masses[k - 1];
        st.expected_mass = ensemble.mu.weights[k - 1];
        std::size_t count = 0;
        std::vector<double> xs;
        for (std::size_t p = 0; p < ensemble.path_count; ++p) {
            if (ensemble.stop_atom[p] == k) {
                ++count;
                xs.push_back(ensemble.stop_x[p]);
            }
        }
        st.empirical_mass = static_cast<double>(count) / n;
        st.standard_error = std::sqrt(st.expected_mass * (1.0 - st.expected_mass) / n);
        if (xs.size() >= 2) {
            st.stop_x_mean = sample_mean(xs);
            st.stop_x_var = sample_variance(xs);
        }
        if (std::abs(st.empirical_mass - st.expected_mass) > 3.0 * st.standard_error) {
            rep.masses_ok = false;
        }
    }

    rep.mean_payoff = sample_mean(ensemble.payoff);
    rep.payoff_se = std::sqrt(sample_variance(ensemble.payoff) / n);
    const double gap = std::abs(rep.mean_payoff - solve.v_star);
    rep.payoff_ok = gap <= std::max(0.01 * std::abs(solve.v_star), 4.0 * rep.payoff_se);

    rep.martingale_mean.assign(r, 0.0);
    rep.martingale_se.assign(r, 0.0);
    for (std::size_t k = 1; k <= r; ++k) {
        std::vector<double> inc;
        inc.reserve(ensemble.path_count);
        for (std::size_t p = 0; p < ensemble.path_count; ++p) {
            const double v = ensemble.value_increments[p * r + (k - 1)];
            if (!std::isnan(v)) inc.push_back(v);
        }
        if (inc.size() >= 2) {
            rep.martingale_mean[k - 1] = sample_mean(inc);
            rep.martingale_se[k - 1] =
                std::sqrt(sample_variance(inc) / static_cast<double>(inc.size()));
            if (std::abs(rep.martingale_mean[k - 1]) > 3.0 * rep.martingale_se[k - 1]) {
                rep.martingale_ok = false;
            }
        }
    }
    return rep;
}

} // namespace dcstop
