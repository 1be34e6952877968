#include "dcstop/grid.hpp"

#include <algorithm>
#include <cmath>

#include "dcstop/errors.hpp"

namespace dcstop {

std::size_t XAxis::nearest(double xq) const {
    const double pos = (xq - x_min) / dx;
    const long i = std::lround(pos);
    return static_cast<std::size_t>(std::clamp(i, 0L, static_cast<long>(n) - 1));
}

XAxis XAxis::centered(double x0, double halfwidth, double dx) {
    const auto n_half = static_cast<std::size_t>(std::ceil(halfwidth / dx - 1e-12));
    XAxis axis;
    axis.dx = dx;
    axis.x_min = x0 - dx * static_cast<double>(n_half);
    axis.n = 2 * n_half + 1;
    return axis;
}

SimplexLattice::SimplexLattice(std::size_t free_dim, std::size_t subdivisions)
    : m_(free_dim), M_(subdivisions) {
    if (M_ < 1) throw Error(ErrorCode::ConfigError, "lattice needs at least one subdivision");
    size_ = count(m_, M_);
    if (m_ == 2) {
        row_offsets_.resize(M_ + 2);
        std::size_t off = 0;
        for (std::size_t i = 0; i <= M_; ++i) {
            row_offsets_[i] = off;
            off += M_ - i + 1;
        }
        row_offsets_[M_ + 1] = off;
    }
}

std::size_t SimplexLattice::count(std::size_t dim, std::size_t budget) const {
    // C(budget + dim, dim)
    std::size_t c = 1;
    for (std::size_t i = 1; i <= dim; ++i) c = c * (budget + i) / i;
    return c;
}

std::size_t SimplexLattice::flat_index(std::span<const std::size_t> multi) const {
    if (m_ == 0) return 0;
    if (m_ == 1) return multi[0];
    if (m_ == 2) return row_offsets_[multi[0]] + multi[1];
    std::size_t rank = 0;
    std::size_t budget = M_;
    for (std::size_t d = 0; d < m_; ++d) {
        const std::size_t rem = m_ - d - 1;
        for (std::size_t a = 0; a < multi[d]; ++a) rank += count(rem, budget - a);
        budget -= multi[d];
    }
    return rank;
}

std::vector<std::size_t> SimplexLattice::multi_index(std::size_t flat) const {
    std::vector<std::size_t> multi(m_, 0);
    if (m_ == 0) return multi;
    if (m_ == 1) {
        multi[0] = flat;
        return multi;
    }
    if (m_ == 2) {
        std::size_t i = 0;
        while (row_offsets_[i + 1] <= flat) ++i;
        multi[0] = i;
        multi[1] = flat - row_offsets_[i];
        return multi;
    }
    std::size_t budget = M_;
    for (std::size_t d = 0; d < m_; ++d) {
        const std::size_t rem = m_ - d - 1;
        std::size_t a = 0;
        while (true) {
            const std::size_t block = count(rem, budget - a);
            if (flat < block) break;
            flat -= block;
            ++a;
        }
        multi[d] = a;
        budget -= a;
    }
    return multi;
}

bool SimplexLattice::contains(std::span<const long> multi) const {
    long sum = 0;
    for (long j : multi) {
        if (j < 0) return false;
        sum += j;
    }
    return sum <= static_cast<long>(M_);
}

StageGrid make_stage_grid(std::size_t stage, const AtomicDistribution& mu, const XAxis& axis,
                          std::size_t subdivisions, const GridConfig& cfg) {
    const std::size_t r = mu.atom_count();
    if (stage < 1 || stage > r) throw Error(ErrorCode::StageMismatch, "stage outside 1..r");

    StageGrid g;
    g.stage = stage;
    g.atom_count = r;
    g.x = axis;
    g.y = SimplexLattice(r - stage, subdivisions);
    g.t_begin = stage == 1 ? 0.0 : mu.times[stage - 2];
    g.t_end = mu.times[stage - 1];

    const double duration = g.t_end - g.t_begin;
    auto steps = static_cast<std::size_t>(std::max(1L, std::lround(duration / cfg.dt)));
    if (duration / static_cast<double>(steps) > cfg.dt * (1.0 + 1e-9)) ++steps;
    g.steps = steps;
    g.dt = duration / static_cast<double>(steps);

    const double cfl = axis.dx * axis.dx;
    if (g.dt > cfl * (1.0 + 1e-9)) {
        throw Error(ErrorCode::CflViolation, "dt must not exceed dx^2");
    }

    g.stencil_width = cfg.stencil_width > 0
                          ? cfg.stencil_width
                          : static_cast<std::size_t>(std::ceil(4.0 * cfg.dx * subdivisions - 1e-12));
    g.stencil_width = std::max<std::size_t>(1, std::min(g.stencil_width, subdivisions));
    return g;
}

} // namespace dcstop
