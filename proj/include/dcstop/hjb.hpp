#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "dcstop/atomic_distribution.hpp"
#include "dcstop/grid.hpp"
#include "dcstop/payoff.hpp"

namespace dcstop {

/// Value surface over one stage grid at a fixed time level.
/// Layout: values[ix * ny + iy].
struct ValueField {
    StageGrid grid;
    double time_label = 0.0;
    std::vector<double> values;

    double at(std::size_t ix, std::size_t iy) const { return values[ix * grid.y.size() + iy]; }

    /// Multilinear interpolation in the free y-coordinates at a fixed x node.
    /// Cell corners falling outside the simplex lattice are clamped to it.
    double interpolate_free(std::size_t ix, std::span<const double> free_coords) const;

    /// Linear in x, multilinear in y.
    double interpolate(double x, std::span<const double> free_coords) const;
};

/// Argmax stencil directions per (time level, x node, y node), stored as the
/// integer offset vector kappa; the realized control is alpha = kappa dy/dx,
/// paired so +x goes with +kappa. Level l holds the control in force on
/// [t_l, t_{l+1}).
struct PolicyField {
    StageGrid grid;
    std::vector<std::int16_t> kappa;

    std::span<const std::int16_t> at(std::size_t level, std::size_t ix, std::size_t iy) const {
        const std::size_t m = grid.y.free_dim();
        return {kappa.data() + ((level * grid.x.n + ix) * grid.y.size() + iy) * m, m};
    }
};

/// All stencil offsets admissible at a node: kappa with |kappa|_inf <= W and
/// both reflections y +- kappa dy inside the stage simplex. Always contains
/// kappa = 0; exactly {0} at a vertex.
std::vector<std::vector<int>> admissible_directions(const StageGrid& grid, std::size_t iy);

/// Reference single-node update of the explicit monotone wide-stencil scheme,
///   u_n = u_{n+1} + dt/(2 dx^2) max_kappa [u(x+dx, y+k dy) - 2u + u(x-dx, y-k dy)],
/// with linear-extrapolation ghosts at the x edges (zero second x-difference).
/// Throws Error{CFLViolation} when dt > dx^2.
double stencil_update(const ValueField& next, std::size_t ix, std::size_t iy,
                      std::vector<int>* argmax_kappa = nullptr);

/// Terminal coupling at t_k: u = y_k f(x) + (1 - y_k) v_next(x, P_k(y)),
/// with v_next interpolated on the next stage's lattice and the vertex e_k
/// taking the continuous-extension value f(x).
ValueField terminal_condition(const StageGrid& grid, const PayoffSpec& f,
                              const ValueField& v_next);

struct StageSolveStats {
    double saturation = 0.0;   // argmax at |kappa|_inf = W, interior nodes
    std::size_t nodes = 0;     // interior node-level updates
};

/// Backward sweep of one stage from its terminal field to t_{k-1}.
/// policy, when non-null, receives the argmax directions per level.
ValueField solve_stage(const StageGrid& grid, const ValueField& terminal, PolicyField* policy,
                       StageSolveStats* stats = nullptr, std::size_t threads = 0);

/// Max centered second difference over admissible pure-y directions; values
/// above +1e-6 flag a concavity violation.
struct ConcavityReport {
    double max_second_difference = 0.0;
    std::size_t ix = 0, iy = 0;
};
ConcavityReport check_concavity(const ValueField& field);

struct SolveDiagnostics {
    std::vector<double> stage_saturation; // per stage 1..r-1
    double concavity_max = 0.0;           // over stage-start fields with free y
    double wall_seconds = 0.0;
};

struct SolveResult {
    AtomicDistribution mu;
    double x0 = 0.0;
    GridConfig grid_config;
    std::vector<ValueField> stage_start;  // stage_start[k-1] = w_k(t_{k-1}) = v_k
    std::vector<PolicyField> policies;    // stages 1..r-1 when stored
    double v_star = 0.0;
    SolveDiagnostics diagnostics;

    const ValueField& value_at_origin() const { return stage_start.front(); }
};

/// Chains the stage solves from k = r down to 1. Stage r is the plain heat
/// semigroup and is evaluated in closed form per x node. Throws
/// Error{UnsupportedDimension} for r > 3 unless cfg.allow_high_dimension.
SolveResult solve_all(const AtomicDistribution& mu, const PayoffSpec& f, double x0,
                      const GridConfig& cfg, bool store_policy, std::size_t threads = 0);

} // namespace dcstop
