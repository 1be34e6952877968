#include "dcstop/simplex.hpp"

#include <cmath>

#include "dcstop/errors.hpp"

namespace dcstop {

StageSimplexPoint make_stage_point(std::size_t stage, std::vector<double> coords, double tol) {
    if (stage < 1 || stage > coords.size()) {
        throw Error(ErrorCode::StageMismatch, "stage must lie in 1..r");
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < coords.size(); ++i) {
        const double c = coords[i];
        if (i + 1 < stage && c != 0.0) {
            throw Error(ErrorCode::DomainError, "coordinates before the stage must be zero");
        }
        if (c < -tol || c > 1.0 + tol) {
            throw Error(ErrorCode::DomainError, "coordinate outside [0,1]");
        }
        sum += c;
    }
    if (std::abs(sum - 1.0) > tol) {
        throw Error(ErrorCode::DomainError, "coordinates must sum to 1");
    }
    return StageSimplexPoint{stage, std::move(coords)};
}

std::optional<StageSimplexPoint> perspective_map(const StageSimplexPoint& y) {
    const std::size_t r = y.atom_count();
    const std::size_t k = y.stage;
    if (k >= r) {
        throw Error(ErrorCode::StageOverflow, "no stage beyond r");
    }
    const double yk = y.coords[k - 1];
    if (yk >= 1.0 - kSimplexConstructTol) {
        return std::nullopt; // vertex e_k
    }
    double tail = 0.0;
    for (std::size_t i = k; i < r; ++i) tail += y.coords[i];
    std::vector<double> out(r, 0.0);
    for (std::size_t i = k; i < r; ++i) out[i] = y.coords[i] / tail;
    return StageSimplexPoint{k + 1, std::move(out)};
}

} // namespace dcstop
