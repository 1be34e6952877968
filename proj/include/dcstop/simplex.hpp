#pragma once

#include <cstddef>
#include <optional>
#include <vector>

namespace dcstop {

/// Simplex membership tolerance at construction time.
inline constexpr double kSimplexConstructTol = 1e-12;
/// Looser tolerance for post-arithmetic membership checks.
inline constexpr double kSimplexArithmeticTol = 1e-9;

/// A point of the face Delta_k: the first k-1 coordinates are exactly zero
/// and the full vector lies on the probability simplex. The vector keeps
/// full length r so indexing is uniform across stages.
struct StageSimplexPoint {
    std::size_t stage = 1;          // k, 1-based
    std::vector<double> coords;     // length r

    std::size_t atom_count() const { return coords.size(); }
    std::size_t free_dimension() const { return coords.size() - stage; }
};

/// Validates membership in Delta_k and returns the point.
/// tol applies to the coordinate-sum check; leading coordinates must be 0.
StageSimplexPoint make_stage_point(std::size_t stage, std::vector<double> coords,
                                   double tol = kSimplexConstructTol);

/// The perspective map P_k: renormalizes the surviving mass into Delta_{k+1}.
///
/// Returns nullopt at the vertex e_k (y_k = 1 within 1e-12), where the map
/// has no image in Delta_{k+1}; callers rely on the continuous-extension
/// convention that the factor (1 - y_k) vanishes there.
/// Throws Error{StageOverflow} when y is already at the last stage.
std::optional<StageSimplexPoint> perspective_map(const StageSimplexPoint& y);

} // namespace dcstop
