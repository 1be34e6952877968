#pragma once

#include <string>
#include <vector>

namespace dcstop {

enum class PayoffKind { Call, Put, PiecewiseLinear };

/// Globally Lipschitz payoff. The only custom class is piecewise-linear:
/// it keeps the Lipschitz constant exact and lets the heat semigroup act in
/// closed form segment by segment.
///
/// Internally every payoff is stored in kink form,
///   f(x) = a + b x + sum_i c_i (x - K_i)^+,
/// where b is the leftmost slope and c_i the slope jump at kink K_i.
class PayoffSpec {
public:
    static PayoffSpec call(double strike);
    static PayoffSpec put(double strike);

    /// knots: sorted (x, f(x)) pairs; slopes beyond the first/last knot are
    /// left_slope/right_slope.
    static PayoffSpec piecewise_linear(std::vector<std::pair<double, double>> knots,
                                       double left_slope, double right_slope);

    double operator()(double x) const;

    PayoffKind kind() const { return kind_; }
    double strike() const { return strike_; }
    double lipschitz_constant() const { return lipschitz_; }

    double affine_intercept() const { return intercept_; }
    double affine_slope() const { return left_slope_; }
    const std::vector<double>& kink_positions() const { return kink_pos_; }
    const std::vector<double>& kink_jumps() const { return kink_jump_; }

    std::string describe() const;

private:
    PayoffSpec() = default;

    PayoffKind kind_ = PayoffKind::PiecewiseLinear;
    double strike_ = 0.0;
    double lipschitz_ = 0.0;
    // Kink form.
    double intercept_ = 0.0;
    double left_slope_ = 0.0;
    std::vector<double> kink_pos_;
    std::vector<double> kink_jump_;
};

} // namespace dcstop
