#pragma once

#include <string>

#include "dcstop/atomic_distribution.hpp"
#include "dcstop/grid.hpp"
#include "dcstop/mc.hpp"
#include "dcstop/payoff.hpp"

namespace dcstop {

/// One experiment definition: payoff, volatility outlook (the atoms), start
/// value, discretization, and Monte Carlo settings.
///
/// File format: flat `key = value` lines with dotted nesting, `#` comments.
///
///   payoff.kind = call | put | piecewise-linear
///   payoff.strike = 0.0
///   payoff.knots = -1:1, 0:0, 1:1        # piecewise-linear only
///   payoff.left_slope = -1.0
///   payoff.right_slope = 1.0
///   atoms = 10:0.5, 20:0.5               # t:p pairs, strictly increasing t
///   x0 = 0.0
///   grid.dx = 0.1
///   grid.dy = 0.005
///   grid.dt = 0.01
///   grid.halfwidth_multiplier = 5.0
///   grid.stencil_width = 0               # 0 = ceil(4 dx/dy)
///   grid.allow_high_dimension = false
///   solve.store_policy = true
///   mc.paths = 1000000
///   mc.seed = 20200517
///   mc.bins = 81
///   mc.resolve_mode = bernoulli | adapted
///   output.dir = out
struct RunConfig {
    PayoffSpec payoff = PayoffSpec::call(0.0);
    AtomicDistribution mu;
    double x0 = 0.0;
    GridConfig grid;
    McConfig mc;
    bool store_policy = true;
    std::string output_dir = "out";
};

RunConfig parse_config_text(const std::string& text);
RunConfig load_config(const std::string& path);

} // namespace dcstop
