#include "dcstop/bridge_max.hpp"

#include <cmath>

#include "dcstop/errors.hpp"

namespace dcstop {

double bridge_max_cdf(double m) {
    if (m < 0.0) {
        throw Error(ErrorCode::DomainError, "bridge maximum is nonnegative");
    }
    if (m == 0.0) return 0.0;
    double sum = 1.0;
    double sign = -1.0;
    for (int j = 1;; ++j) {
        const double term = 2.0 * std::exp(-2.0 * static_cast<double>(j) * j * m * m);
        if (term < 1e-14) break;
        sum += sign * term;
        sign = -sign;
    }
    return sum < 0.0 ? 0.0 : sum;
}

double bridge_max_cdf_inv(double q) {
    if (!(q > 0.0 && q < 1.0)) {
        throw Error(ErrorCode::DomainError, "bridge quantile requires q in (0,1)");
    }
    double lo = 0.0;
    double hi = 4.0; // cdf(4) > 1 - 1e-13
    while (bridge_max_cdf(hi) < q) hi *= 2.0;
    while (hi - lo > 1e-15) {
        const double mid = 0.5 * (lo + hi);
        if (bridge_max_cdf(mid) < q) {
            lo = mid;
        } else {
            hi = mid;
        }
        if (std::abs(bridge_max_cdf(mid) - q) < 1e-13 && hi - lo < 1e-9) break;
    }
    return 0.5 * (lo + hi);
}

} // namespace dcstop
