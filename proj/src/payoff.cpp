#include "dcstop/payoff.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "dcstop/errors.hpp"

namespace dcstop {

PayoffSpec PayoffSpec::call(double strike) {
    PayoffSpec f;
    f.kind_ = PayoffKind::Call;
    f.strike_ = strike;
    f.intercept_ = 0.0;
    f.left_slope_ = 0.0;
    f.kink_pos_ = {strike};
    f.kink_jump_ = {1.0};
    f.lipschitz_ = 1.0;
    return f;
}

PayoffSpec PayoffSpec::put(double strike) {
    PayoffSpec f;
    f.kind_ = PayoffKind::Put;
    f.strike_ = strike;
    // (K - x)^+ = (K - x) + (x - K)^+
    f.intercept_ = strike;
    f.left_slope_ = -1.0;
    f.kink_pos_ = {strike};
    f.kink_jump_ = {1.0};
    f.lipschitz_ = 1.0;
    return f;
}

PayoffSpec PayoffSpec::piecewise_linear(std::vector<std::pair<double, double>> knots,
                                        double left_slope, double right_slope) {
    if (knots.empty()) {
        throw Error(ErrorCode::ConfigError, "piecewise-linear payoff needs at least one knot");
    }
    for (std::size_t i = 1; i < knots.size(); ++i) {
        if (!(knots[i].first > knots[i - 1].first)) {
            throw Error(ErrorCode::ConfigError, "payoff knots must be strictly increasing in x");
        }
    }
    PayoffSpec f;
    f.kind_ = PayoffKind::PiecewiseLinear;
    f.left_slope_ = left_slope;
    f.intercept_ = knots.front().second - left_slope * knots.front().first;

    std::vector<double> slopes;
    slopes.push_back(left_slope);
    for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
        slopes.push_back((knots[i + 1].second - knots[i].second) /
                         (knots[i + 1].first - knots[i].first));
    }
    slopes.push_back(right_slope);

    f.lipschitz_ = 0.0;
    for (double s : slopes) f.lipschitz_ = std::max(f.lipschitz_, std::abs(s));
    for (std::size_t i = 0; i < knots.size(); ++i) {
        const double jump = slopes[i + 1] - slopes[i];
        if (jump != 0.0) {
            f.kink_pos_.push_back(knots[i].first);
            f.kink_jump_.push_back(jump);
        }
    }
    return f;
}

double PayoffSpec::operator()(double x) const {
    double v = intercept_ + left_slope_ * x;
    for (std::size_t i = 0; i < kink_pos_.size(); ++i) {
        const double d = x - kink_pos_[i];
        if (d > 0.0) v += kink_jump_[i] * d;
    }
    return v;
}

std::string PayoffSpec::describe() const {
    std::ostringstream os;
    switch (kind_) {
        case PayoffKind::Call: os << "call(strike=" << strike_ << ")"; break;
        case PayoffKind::Put: os << "put(strike=" << strike_ << ")"; break;
        case PayoffKind::PiecewiseLinear:
            os << "piecewise-linear(" << kink_pos_.size() << " kinks, L=" << lipschitz_ << ")";
            break;
    }
    return os.str();
}

} // namespace dcstop
