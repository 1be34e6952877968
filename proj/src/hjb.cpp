#include "dcstop/hjb.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstring>

#include "dcstop/closed_form.hpp"
#include "dcstop/errors.hpp"
#include "dcstop/parallel.hpp"

namespace dcstop {

namespace {

long lmin(long a, long b) { return a < b ? a : b; }
long lmax(long a, long b) { return a > b ? a : b; }

} // namespace

double ValueField::interpolate_free(std::size_t ix, std::span<const double> free_coords) const {
    const SimplexLattice& lat = grid.y;
    const std::size_t m = lat.free_dim();
    const std::size_t ny = lat.size();
    const double* row = values.data() + ix * ny;
    if (m == 0) return row[0];

    const auto M = static_cast<long>(lat.subdivisions());
    if (m == 1) {
        const double pos = std::clamp(free_coords[0], 0.0, 1.0) * static_cast<double>(M);
        const long i0 = lmin(static_cast<long>(pos), M - 1);
        const double w = pos - static_cast<double>(i0);
        return (1.0 - w) * row[i0] + w * row[i0 + 1];
    }

    // Corner lookup with simplex clamping: indices are clipped so the
    // multi-index sum stays within the lattice budget.
    auto corner = [&](std::span<const long> idx) {
        std::vector<std::size_t> multi(m);
        long budget = M;
        for (std::size_t d = 0; d < m; ++d) {
            const long a = std::clamp(idx[d], 0L, budget);
            multi[d] = static_cast<std::size_t>(a);
            budget -= a;
        }
        return row[lat.flat_index(multi)];
    };

    std::vector<long> base(m);
    std::vector<double> frac(m);
    for (std::size_t d = 0; d < m; ++d) {
        const double pos = std::clamp(free_coords[d], 0.0, 1.0) * static_cast<double>(M);
        base[d] = lmin(static_cast<long>(pos), M - 1);
        frac[d] = pos - static_cast<double>(base[d]);
    }
    double acc = 0.0;
    std::vector<long> idx(m);
    for (std::size_t mask = 0; mask < (std::size_t{1} << m); ++mask) {
        double w = 1.0;
        for (std::size_t d = 0; d < m; ++d) {
            const bool hi = (mask >> d) & 1U;
            idx[d] = base[d] + (hi ? 1 : 0);
            w *= hi ? frac[d] : 1.0 - frac[d];
        }
        if (w != 0.0) acc += w * corner(idx);
    }
    return acc;
}

double ValueField::interpolate(double x, std::span<const double> free_coords) const {
    const XAxis& ax = grid.x;
    const double pos = std::clamp((x - ax.x_min) / ax.dx, 0.0, static_cast<double>(ax.n - 1));
    const auto i0 = lmin(static_cast<long>(pos), static_cast<long>(ax.n) - 2);
    const double w = pos - static_cast<double>(i0);
    const double lo = interpolate_free(static_cast<std::size_t>(i0), free_coords);
    const double hi = interpolate_free(static_cast<std::size_t>(i0) + 1, free_coords);
    return (1.0 - w) * lo + w * hi;
}

std::vector<std::vector<int>> admissible_directions(const StageGrid& grid, std::size_t iy) {
    const SimplexLattice& lat = grid.y;
    const std::size_t m = lat.free_dim();
    const auto W = static_cast<long>(grid.stencil_width);
    std::vector<std::vector<int>> out;
    if (m == 0) {
        out.push_back({});
        return out;
    }
    const std::vector<std::size_t> multi = lat.multi_index(iy);
    std::vector<long> kappa(m, -W);
    std::vector<long> plus(m);
    std::vector<long> minus(m);
    while (true) {
        bool feasible = true;
        for (std::size_t d = 0; d < m; ++d) {
            plus[d] = static_cast<long>(multi[d]) + kappa[d];
            minus[d] = static_cast<long>(multi[d]) - kappa[d];
        }
        feasible = lat.contains(plus) && lat.contains(minus);
        if (feasible) {
            out.emplace_back(kappa.begin(), kappa.end());
        }
        std::size_t d = 0;
        while (d < m && kappa[d] == W) {
            kappa[d] = -W;
            ++d;
        }
        if (d == m) break;
        ++kappa[d];
    }
    // kappa = 0 first, then by |kappa| ascending: the deterministic argmax
    // tie-break order used by the sweeps.
    std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
        long na = 0, nb = 0;
        for (int v : a) na = lmax(na, std::labs(v));
        for (int v : b) nb = lmax(nb, std::labs(v));
        return na < nb;
    });
    return out;
}

namespace {

/// One output row (all y nodes at a fixed x) for free dimension 1.
void sweep_row_m1(const double* up, const double* uc, const double* um, double lam, long W,
                  long M, double* out, std::int16_t* pol, std::size_t* sat) {
    for (long iy = 0; iy <= M; ++iy) {
        const long kmax = lmin(W, lmin(iy, M - iy));
        double best = up[iy] + um[iy];
        if (pol != nullptr) {
            long arg = 0;
            for (long k = 1; k <= kmax; ++k) {
                const double a = up[iy + k] + um[iy - k];
                const double b = up[iy - k] + um[iy + k];
                if (a > best) {
                    best = a;
                    arg = k;
                }
                if (b > best) {
                    best = b;
                    arg = -k;
                }
            }
            pol[iy] = static_cast<std::int16_t>(arg);
            if (sat != nullptr && kmax == W && std::labs(arg) == W) ++*sat;
        } else {
#pragma omp simd reduction(max : best)
            for (long k = -kmax; k <= kmax; ++k) {
                const double cand = up[iy + k] + um[iy - k];
                best = best < cand ? cand : best;
            }
            if (sat != nullptr && kmax == W && W > 0 &&
                (best == up[iy + W] + um[iy - W] || best == up[iy - W] + um[iy + W])) {
                ++*sat;
            }
        }
        out[iy] = uc[iy] + lam * (best - 2.0 * uc[iy]);
    }
}

/// One output row for free dimension 2 (triangular lattice).
void sweep_row_m2(const SimplexLattice& lat, const double* up, const double* uc, const double* um,
                  double lam, long W, long M, double* out, std::int16_t* pol, std::size_t* sat) {
    for (long i = 0; i <= M; ++i) {
        const std::size_t base = lat.row_offset(static_cast<std::size_t>(i));
        const long k1cap = lmin(W, i);
        for (long j = 0; j <= M - i; ++j) {
            const long slack = M - i - j;
            const long jcap = lmin(W, j);
            const std::size_t node = base + static_cast<std::size_t>(j);
            double best = up[node] + um[node];
            long arg1 = 0, arg2 = 0;
            for (long k1 = -k1cap; k1 <= k1cap; ++k1) {
                const long lo = lmax(-jcap, -slack - k1);
                const long hi = lmin(jcap, slack - k1);
                if (lo > hi) continue;
                const double* rp = up + lat.row_offset(static_cast<std::size_t>(i + k1));
                const double* rm = um + lat.row_offset(static_cast<std::size_t>(i - k1));
                if (pol != nullptr) {
                    for (long k2 = lo; k2 <= hi; ++k2) {
                        const double cand = rp[j + k2] + rm[j - k2];
                        if (cand > best) {
                            best = cand;
                            arg1 = k1;
                            arg2 = k2;
                        }
                    }
                } else {
                    double row_best = best;
#pragma omp simd reduction(max : row_best)
                    for (long k2 = lo; k2 <= hi; ++k2) {
                        const double cand = rp[j + k2] + rm[j - k2];
                        row_best = row_best < cand ? cand : row_best;
                    }
                    best = row_best;
                }
            }
            if (pol != nullptr) {
                pol[2 * node] = static_cast<std::int16_t>(arg1);
                pol[2 * node + 1] = static_cast<std::int16_t>(arg2);
                if (sat != nullptr && lmax(std::labs(arg1), std::labs(arg2)) == W) ++*sat;
            }
            out[node] = uc[node] + lam * (best - 2.0 * uc[node]);
        }
    }
}

/// Generic free dimension: reference-quality enumeration, opt-in path.
void sweep_row_generic(const StageGrid& grid, const double* up, const double* uc,
                       const double* um, double lam, double* out, std::int16_t* pol) {
    const SimplexLattice& lat = grid.y;
    const std::size_t m = lat.free_dim();
    const std::size_t ny = lat.size();
    if (m == 0) {
        out[0] = uc[0] + lam * (up[0] - 2.0 * uc[0] + um[0]);
        return;
    }
    std::vector<std::size_t> mplus(m), mminus(m);
    for (std::size_t iy = 0; iy < ny; ++iy) {
        const auto dirs = admissible_directions(grid, iy);
        const std::vector<std::size_t> multi = lat.multi_index(iy);
        double best = -std::numeric_limits<double>::infinity();
        std::size_t arg = 0;
        for (std::size_t di = 0; di < dirs.size(); ++di) {
            for (std::size_t d = 0; d < m; ++d) {
                mplus[d] = multi[d] + static_cast<std::size_t>(dirs[di][d]);
                mminus[d] = multi[d] - static_cast<std::size_t>(dirs[di][d]);
            }
            const double cand = up[lat.flat_index(mplus)] + um[lat.flat_index(mminus)];
            if (cand > best) {
                best = cand;
                arg = di;
            }
        }
        if (pol != nullptr) {
            for (std::size_t d = 0; d < m; ++d) {
                pol[iy * m + d] = static_cast<std::int16_t>(dirs[arg][d]);
            }
        }
        out[iy] = uc[iy] + lam * (best - 2.0 * uc[iy]);
    }
}

void make_ghost(const double* near_row, const double* far_row, std::size_t ny, double* ghost) {
    for (std::size_t i = 0; i < ny; ++i) ghost[i] = 2.0 * near_row[i] - far_row[i];
}

} // namespace

double stencil_update(const ValueField& next, std::size_t ix, std::size_t iy,
                      std::vector<int>* argmax_kappa) {
    const StageGrid& grid = next.grid;
    const double dx2 = grid.x.dx * grid.x.dx;
    if (grid.dt > dx2 * (1.0 + 1e-9)) {
        throw Error(ErrorCode::CflViolation, "dt must not exceed dx^2");
    }
    const std::size_t ny = grid.y.size();
    const std::size_t nx = grid.x.n;
    const double lam = grid.dt / (2.0 * dx2);

    std::vector<double> ghost;
    const double* up;
    const double* um;
    const double* uc = next.values.data() + ix * ny;
    if (ix + 1 < nx) {
        up = next.values.data() + (ix + 1) * ny;
    } else {
        ghost.resize(ny);
        make_ghost(uc, next.values.data() + (ix - 1) * ny, ny, ghost.data());
        up = ghost.data();
    }
    std::vector<double> ghost2;
    if (ix >= 1) {
        um = next.values.data() + (ix - 1) * ny;
    } else {
        ghost2.resize(ny);
        make_ghost(uc, next.values.data() + (ix + 1) * ny, ny, ghost2.data());
        um = ghost2.data();
    }

    const auto dirs = admissible_directions(grid, iy);
    const SimplexLattice& lat = grid.y;
    const std::vector<std::size_t> multi = lat.multi_index(iy);
    const std::size_t m = lat.free_dim();
    double best = -std::numeric_limits<double>::infinity();
    std::size_t arg = 0;
    std::vector<std::size_t> mplus(m), mminus(m);
    for (std::size_t di = 0; di < dirs.size(); ++di) {
        for (std::size_t d = 0; d < m; ++d) {
            mplus[d] = multi[d] + static_cast<std::size_t>(dirs[di][d]);
            mminus[d] = multi[d] - static_cast<std::size_t>(dirs[di][d]);
        }
        const double cand = up[lat.flat_index(mplus)] + um[lat.flat_index(mminus)];
        if (cand > best) {
            best = cand;
            arg = di;
        }
    }
    if (argmax_kappa != nullptr) *argmax_kappa = dirs[arg];
    return uc[iy] + lam * (best - 2.0 * uc[iy]);
}

ValueField terminal_condition(const StageGrid& grid, const PayoffSpec& f,
                              const ValueField& v_next) {
    if (v_next.grid.stage != grid.stage + 1) {
        throw Error(ErrorCode::StageMismatch, "terminal coupling needs the next stage's field");
    }
    if (v_next.grid.x.n != grid.x.n || v_next.grid.y.subdivisions() != grid.y.subdivisions()) {
        throw Error(ErrorCode::StageMismatch, "stage grids must share axis and lattice");
    }
    const std::size_t nx = grid.x.n;
    const std::size_t ny = grid.y.size();
    const std::size_t m = grid.y.free_dim();
    const auto M = static_cast<double>(grid.y.subdivisions());

    ValueField out;
    out.grid = grid;
    out.time_label = grid.t_end;
    out.values.resize(nx * ny);

    std::vector<double> fx(nx);
    for (std::size_t ix = 0; ix < nx; ++ix) fx[ix] = f(grid.x.node(ix));

    // Per y node: stop weight q = y_k and the image of the perspective map in
    // the next stage's free coordinates.
    std::vector<double> q_of(ny);
    std::vector<std::vector<double>> pfree_of(ny);
    for (std::size_t iy = 0; iy < ny; ++iy) {
        const auto multi = grid.y.multi_index(iy);
        const auto j0 = static_cast<double>(multi[0]);
        q_of[iy] = j0 / M;
        if (j0 < M) {
            std::vector<double> pf(m - 1);
            for (std::size_t d = 0; d + 1 < m; ++d) {
                pf[d] = static_cast<double>(multi[d + 1]) / (M - j0);
            }
            pfree_of[iy] = std::move(pf);
        }
    }

    for (std::size_t ix = 0; ix < nx; ++ix) {
        double* row = out.values.data() + ix * ny;
        for (std::size_t iy = 0; iy < ny; ++iy) {
            const double q = q_of[iy];
            if (q >= 1.0) {
                row[iy] = fx[ix]; // vertex e_k: continuous extension
            } else {
                const double v = v_next.interpolate_free(ix, pfree_of[iy]);
                row[iy] = q * fx[ix] + (1.0 - q) * v;
            }
        }
    }
    return out;
}

ValueField solve_stage(const StageGrid& grid, const ValueField& terminal, PolicyField* policy,
                       StageSolveStats* stats, std::size_t threads) {
    const std::size_t nx = grid.x.n;
    const std::size_t ny = grid.y.size();
    const std::size_t m = grid.y.free_dim();
    const auto M = static_cast<long>(grid.y.subdivisions());
    const auto W = static_cast<long>(grid.stencil_width);
    const double dx2 = grid.x.dx * grid.x.dx;
    if (grid.dt > dx2 * (1.0 + 1e-9)) {
        throw Error(ErrorCode::CflViolation, "dt must not exceed dx^2");
    }
    const double lam = grid.dt / (2.0 * dx2);
    if (threads == 0) threads = default_thread_count();

    if (policy != nullptr) {
        if (grid.stencil_width > 32767) {
            throw Error(ErrorCode::ConfigError, "stencil width too large for policy storage");
        }
        const std::size_t entries = grid.steps * nx * ny * std::max<std::size_t>(m, 1);
        if (entries * sizeof(std::int16_t) > std::size_t{6} * 1024 * 1024 * 1024) {
            throw Error(ErrorCode::ConfigError,
                        "policy cache would exceed 6 GiB; coarsen the grid or disable storage");
        }
        policy->grid = grid;
        policy->kappa.assign(grid.steps * nx * ny * std::max<std::size_t>(m, 1), 0);
    }

    std::vector<double> next = terminal.values;
    std::vector<double> cur(nx * ny);
    std::vector<double> ghost_lo(ny);
    std::vector<double> ghost_hi(ny);
    std::vector<std::size_t> sat_rows(nx, 0);

    for (std::size_t level = grid.steps; level-- > 0;) {
        const double* src = next.data();
        make_ghost(src, src + ny, ny, ghost_lo.data());                      // below ix = 0
        make_ghost(src + (nx - 1) * ny, src + (nx - 2) * ny, ny, ghost_hi.data()); // above ix = nx-1

        std::int16_t* pol_level =
            policy != nullptr ? policy->kappa.data() + level * nx * ny * std::max<std::size_t>(m, 1)
                              : nullptr;

        parallel_for_chunks(
            nx,
            [&](std::size_t begin, std::size_t end) {
                for (std::size_t ix = begin; ix < end; ++ix) {
                    const double* up = ix + 1 < nx ? src + (ix + 1) * ny : ghost_hi.data();
                    const double* um = ix >= 1 ? src + (ix - 1) * ny : ghost_lo.data();
                    const double* uc = src + ix * ny;
                    double* out = cur.data() + ix * ny;
                    std::int16_t* pol =
                        pol_level != nullptr ? pol_level + ix * ny * std::max<std::size_t>(m, 1)
                                             : nullptr;
                    std::size_t* sat =
                        (ix >= 1 && ix + 1 < nx) ? &sat_rows[ix] : nullptr;
                    switch (m) {
                        case 0:
                            out[0] = uc[0] + lam * (up[0] - 2.0 * uc[0] + um[0]);
                            break;
                        case 1:
                            sweep_row_m1(up, uc, um, lam, W, M, out, pol, sat);
                            break;
                        case 2:
                            sweep_row_m2(grid.y, up, uc, um, lam, W, M, out, pol, sat);
                            break;
                        default:
                            sweep_row_generic(grid, up, uc, um, lam, out, pol);
                            break;
                    }
                }
            },
            threads);
        std::swap(cur, next);
    }

    if (stats != nullptr) {
        std::size_t total = 0;
        for (std::size_t s : sat_rows) total += s;
        stats->nodes = grid.steps * (nx - 2) * ny;
        stats->saturation = stats->nodes > 0 ? static_cast<double>(total) /
                                                   static_cast<double>(stats->nodes)
                                             : 0.0;
    }

    ValueField out;
    out.grid = grid;
    out.time_label = grid.t_begin;
    out.values = std::move(next);
    return out;
}

ConcavityReport check_concavity(const ValueField& field) {
    const StageGrid& grid = field.grid;
    const SimplexLattice& lat = grid.y;
    const std::size_t m = lat.free_dim();
    ConcavityReport rep;
    if (m == 0) return rep;
    rep.max_second_difference = -std::numeric_limits<double>::infinity();

    const std::size_t nx = grid.x.n;
    const std::size_t ny = lat.size();
    const auto M = static_cast<long>(lat.subdivisions());
    const auto W = static_cast<long>(grid.stencil_width);

    for (std::size_t ix = 0; ix < nx; ++ix) {
        const double* row = field.values.data() + ix * ny;
        if (m == 1) {
            for (long iy = 0; iy <= M; ++iy) {
                const long kmax = lmin(W, lmin(iy, M - iy));
                for (long k = 1; k <= kmax; ++k) {
                    const double d2 = row[iy + k] - 2.0 * row[iy] + row[iy - k];
                    if (d2 > rep.max_second_difference) {
                        rep.max_second_difference = d2;
                        rep.ix = ix;
                        rep.iy = static_cast<std::size_t>(iy);
                    }
                }
            }
        } else if (m == 2) {
            for (long i = 0; i <= M; ++i) {
                const std::size_t base = lat.row_offset(static_cast<std::size_t>(i));
                const long k1cap = lmin(W, i);
                for (long j = 0; j <= M - i; ++j) {
                    const long slack = M - i - j;
                    const long jcap = lmin(W, j);
                    const std::size_t node = base + static_cast<std::size_t>(j);
                    for (long k1 = 0; k1 <= k1cap; ++k1) {
                        const long lo = lmax(-jcap, -slack - k1);
                        const long hi = lmin(jcap, slack - k1);
                        if (lo > hi) continue;
                        const double* rp = row + lat.row_offset(static_cast<std::size_t>(i + k1));
                        const double* rm = row + lat.row_offset(static_cast<std::size_t>(i - k1));
                        for (long k2 = (k1 == 0 ? 1 : lo); k2 <= hi; ++k2) {
                            const double d2 = rp[j + k2] - 2.0 * row[node] + rm[j - k2];
                            if (d2 > rep.max_second_difference) {
                                rep.max_second_difference = d2;
                                rep.ix = ix;
                                rep.iy = node;
                            }
                        }
                    }
                }
            }
        } else {
            StageGrid g = grid;
            for (std::size_t iy = 0; iy < ny; ++iy) {
                const auto dirs = admissible_directions(g, iy);
                const auto multi = lat.multi_index(iy);
                std::vector<std::size_t> mp(m), mm(m);
                for (const auto& kappa : dirs) {
                    bool zero = true;
                    for (int v : kappa) zero = zero && v == 0;
                    if (zero) continue;
                    for (std::size_t d = 0; d < m; ++d) {
                        mp[d] = multi[d] + static_cast<std::size_t>(kappa[d]);
                        mm[d] = multi[d] - static_cast<std::size_t>(kappa[d]);
                    }
                    const double d2 =
                        row[lat.flat_index(mp)] - 2.0 * row[iy] + row[lat.flat_index(mm)];
                    if (d2 > rep.max_second_difference) {
                        rep.max_second_difference = d2;
                        rep.ix = ix;
                        rep.iy = iy;
                    }
                }
            }
        }
    }
    if (!std::isfinite(rep.max_second_difference)) rep.max_second_difference = 0.0;
    return rep;
}

SolveResult solve_all(const AtomicDistribution& mu, const PayoffSpec& f, double x0,
                      const GridConfig& cfg, bool store_policy, std::size_t threads) {
    const auto t_start = std::chrono::steady_clock::now();
    const std::size_t r = mu.atom_count();
    if (r > 3 && !cfg.allow_high_dimension) {
        throw Error(ErrorCode::UnsupportedDimension,
                    "free dimension above 2 needs the high-dimension override");
    }
    const auto M = static_cast<std::size_t>(std::max(1.0, std::round(1.0 / cfg.dy)));
    const double t_r = mu.times.back();
    const XAxis axis = XAxis::centered(x0, cfg.halfwidth_multiplier * std::sqrt(t_r), cfg.dx);

    SolveResult res;
    res.mu = mu;
    res.x0 = x0;
    res.grid_config = cfg;
    res.stage_start.resize(r);
    if (store_policy) res.policies.resize(r > 0 ? r - 1 : 0);
    res.diagnostics.stage_saturation.assign(r > 0 ? r - 1 : 0, 0.0);

    // Stage r: plain heat semigroup, evaluated in closed form per x node.
    {
        const StageGrid grid_r = make_stage_grid(r, mu, axis, M, cfg);
        ValueField v;
        v.grid = grid_r;
        v.time_label = grid_r.t_begin;
        v.values.resize(axis.n);
        const double gap = mu.stage_gap(r);
        for (std::size_t ix = 0; ix < axis.n; ++ix) {
            v.values[ix] = heat_value(f, gap, axis.node(ix));
        }
        res.stage_start[r - 1] = std::move(v);
    }

    for (std::size_t k = r - 1; k >= 1; --k) {
        const StageGrid grid_k = make_stage_grid(k, mu, axis, M, cfg);
        const ValueField terminal = terminal_condition(grid_k, f, res.stage_start[k]);
        StageSolveStats stats;
        PolicyField* pol = store_policy ? &res.policies[k - 1] : nullptr;
        res.stage_start[k - 1] = solve_stage(grid_k, terminal, pol, &stats, threads);
        res.diagnostics.stage_saturation[k - 1] = stats.saturation;
        if (k == 1) break;
    }

    std::vector<double> p_free(r > 0 ? r - 1 : 0);
    for (std::size_t d = 0; d + 1 < r; ++d) p_free[d] = mu.weights[d];
    res.v_star = res.stage_start[0].interpolate(x0, p_free);

    double conc = 0.0;
    for (const ValueField& fld : res.stage_start) {
        if (fld.grid.y.free_dim() >= 1) {
            conc = std::max(conc, check_concavity(fld).max_second_difference);
        }
    }
    res.diagnostics.concavity_max = conc;
    res.diagnostics.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    return res;
}

} // namespace dcstop
