#include "dcstop/config.hpp"

#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

#include "dcstop/errors.hpp"

namespace dcstop {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep)) out.push_back(trim(item));
    return out;
}

double parse_double(const std::string& key, const std::string& v) {
    try {
        std::size_t used = 0;
        const double x = std::stod(v, &used);
        if (used != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw Error(ErrorCode::ConfigError, "bad number for " + key + ": '" + v + "'");
    }
}

long long parse_int(const std::string& key, const std::string& v) {
    try {
        std::size_t used = 0;
        const long long x = std::stoll(v, &used);
        if (used != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw Error(ErrorCode::ConfigError, "bad integer for " + key + ": '" + v + "'");
    }
}

bool parse_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    throw Error(ErrorCode::ConfigError, "bad boolean for " + key + ": '" + v + "'");
}

std::vector<std::pair<double, double>> parse_pairs(const std::string& key, const std::string& v) {
    std::vector<std::pair<double, double>> out;
    for (const std::string& item : split(v, ',')) {
        if (item.empty()) continue;
        const auto colon = item.find(':');
        if (colon == std::string::npos) {
            throw Error(ErrorCode::ConfigError, key + " entries must look like a:b");
        }
        out.emplace_back(parse_double(key, trim(item.substr(0, colon))),
                         parse_double(key, trim(item.substr(colon + 1))));
    }
    if (out.empty()) throw Error(ErrorCode::ConfigError, key + " must not be empty");
    return out;
}

} // namespace

RunConfig parse_config_text(const std::string& text) {
    std::map<std::string, std::string> kv;
    std::stringstream ss(text);
    std::string line;
    while (std::getline(ss, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw Error(ErrorCode::ConfigError, "expected key = value, got '" + line + "'");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) throw Error(ErrorCode::ConfigError, "empty key in config");
        if (!kv.emplace(key, value).second) {
            throw Error(ErrorCode::ConfigError, "duplicate key '" + key + "'");
        }
    }

    RunConfig cfg;
    std::string payoff_kind = "call";
    double strike = 0.0;
    std::vector<std::pair<double, double>> knots;
    double left_slope = 0.0;
    double right_slope = 1.0;
    bool have_atoms = false;

    for (const auto& [key, value] : kv) {
        if (key == "payoff.kind") {
            payoff_kind = value;
        } else if (key == "payoff.strike") {
            strike = parse_double(key, value);
        } else if (key == "payoff.knots") {
            knots = parse_pairs(key, value);
        } else if (key == "payoff.left_slope") {
            left_slope = parse_double(key, value);
        } else if (key == "payoff.right_slope") {
            right_slope = parse_double(key, value);
        } else if (key == "atoms") {
            std::vector<double> times, weights;
            for (const auto& [t, p] : parse_pairs(key, value)) {
                times.push_back(t);
                weights.push_back(p);
            }
            cfg.mu = validate_distribution(times, weights);
            have_atoms = true;
        } else if (key == "x0") {
            cfg.x0 = parse_double(key, value);
        } else if (key == "grid.dx") {
            cfg.grid.dx = parse_double(key, value);
        } else if (key == "grid.dy") {
            cfg.grid.dy = parse_double(key, value);
        } else if (key == "grid.dt") {
            cfg.grid.dt = parse_double(key, value);
        } else if (key == "grid.halfwidth_multiplier") {
            cfg.grid.halfwidth_multiplier = parse_double(key, value);
        } else if (key == "grid.stencil_width") {
            cfg.grid.stencil_width = static_cast<std::size_t>(parse_int(key, value));
        } else if (key == "grid.allow_high_dimension") {
            cfg.grid.allow_high_dimension = parse_bool(key, value);
        } else if (key == "solve.store_policy") {
            cfg.store_policy = parse_bool(key, value);
        } else if (key == "mc.paths") {
            cfg.mc.paths = static_cast<std::size_t>(parse_int(key, value));
        } else if (key == "mc.seed") {
            cfg.mc.seed = static_cast<std::uint64_t>(parse_int(key, value));
        } else if (key == "mc.bins") {
            cfg.mc.bins = static_cast<std::size_t>(parse_int(key, value));
        } else if (key == "mc.resolve_mode") {
            if (value == "bernoulli") {
                cfg.mc.resolve = ResolveMode::Bernoulli;
            } else if (value == "adapted") {
                cfg.mc.resolve = ResolveMode::AdaptedBridge;
            } else {
                throw Error(ErrorCode::ConfigError, "mc.resolve_mode must be bernoulli or adapted");
            }
        } else if (key == "output.dir") {
            cfg.output_dir = value;
        } else {
            throw Error(ErrorCode::ConfigError, "unknown config key '" + key + "'");
        }
    }

    if (!have_atoms) throw Error(ErrorCode::ConfigError, "config needs an atoms line");

    if (payoff_kind == "call") {
        cfg.payoff = PayoffSpec::call(strike);
    } else if (payoff_kind == "put") {
        cfg.payoff = PayoffSpec::put(strike);
    } else if (payoff_kind == "piecewise-linear") {
        if (knots.empty()) {
            throw Error(ErrorCode::ConfigError, "piecewise-linear payoff needs payoff.knots");
        }
        cfg.payoff = PayoffSpec::piecewise_linear(knots, left_slope, right_slope);
    } else {
        throw Error(ErrorCode::ConfigError, "payoff.kind must be call, put or piecewise-linear");
    }

    if (cfg.grid.dt > cfg.grid.dx * cfg.grid.dx * (1.0 + 1e-9)) {
        throw Error(ErrorCode::CflViolation, "grid.dt must not exceed grid.dx^2");
    }
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::IoError, "cannot open config file " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

} // namespace dcstop
