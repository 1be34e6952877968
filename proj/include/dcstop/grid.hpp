#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "dcstop/atomic_distribution.hpp"

namespace dcstop {

/// Uniform x-axis, centered so the anchor point is an exact node.
struct XAxis {
    double x_min = 0.0;
    double dx = 0.1;
    std::size_t n = 1;

    double node(std::size_t i) const { return x_min + dx * static_cast<double>(i); }
    double x_max() const { return node(n - 1); }

    std::size_t nearest(double x) const;

    /// Axis spanning [x0 - halfwidth, x0 + halfwidth], widened so x0 is a node.
    static XAxis centered(double x0, double halfwidth, double dx);
};

/// Uniform lattice on the free coordinates of a simplex face:
/// multi-indices j in {0..M}^m with sum(j) <= M, coordinate values j/M.
/// m = 0 is the single empty node, m = 1 an interval, m = 2 a triangle.
class SimplexLattice {
public:
    SimplexLattice(std::size_t free_dim, std::size_t subdivisions);

    std::size_t free_dim() const { return m_; }
    std::size_t subdivisions() const { return M_; }
    double spacing() const { return 1.0 / static_cast<double>(M_); }
    std::size_t size() const { return size_; }

    double coordinate(std::size_t j) const { return static_cast<double>(j) / static_cast<double>(M_); }

    std::size_t flat_index(std::span<const std::size_t> multi) const;
    std::vector<std::size_t> multi_index(std::size_t flat) const;
    bool contains(std::span<const long> multi) const;

    /// m == 2 only: flat index of the first node of row i (nodes (i, 0..M-i)).
    std::size_t row_offset(std::size_t i) const { return row_offsets_[i]; }

private:
    std::size_t count(std::size_t dim, std::size_t budget) const;

    std::size_t m_;
    std::size_t M_;
    std::size_t size_;
    std::vector<std::size_t> row_offsets_; // m == 2
};

/// Space-time grid for one stage: x-axis, y-lattice on the stage's free
/// coordinates, and the time step over [t_begin, t_end], adjusted downward
/// so the stage duration is an integer number of steps.
struct StageGrid {
    std::size_t stage = 1;
    std::size_t atom_count = 1;
    XAxis x;
    SimplexLattice y{0, 1};
    double t_begin = 0.0;
    double t_end = 1.0;
    std::size_t steps = 1;
    double dt = 1.0;
    std::size_t stencil_width = 1;

    double time_at(std::size_t level) const { return t_begin + dt * static_cast<double>(level); }
};

/// Discretization parameters shared by all stages of a solve.
struct GridConfig {
    double dx = 0.1;
    double dy = 0.005;
    double dt = 0.01;
    double halfwidth_multiplier = 5.0;
    std::size_t stencil_width = 0; // 0 = ceil(4 dx / dy)
    bool allow_high_dimension = false;
};

/// Builds the stage-k grid. Throws Error{CFLViolation} when the adjusted
/// time step exceeds dx^2.
StageGrid make_stage_grid(std::size_t stage, const AtomicDistribution& mu, const XAxis& axis,
                          std::size_t subdivisions, const GridConfig& cfg);

} // namespace dcstop
