#include "dcstop/coupling.hpp"

#include <algorithm>
#include <cmath>

#include "dcstop/bridge_max.hpp"
#include "dcstop/errors.hpp"
#include "dcstop/normal.hpp"

namespace dcstop {

double QuantileBox::volume() const {
    double v = 1.0;
    for (std::size_t d = 0; d < lo.size(); ++d) v *= std::max(0.0, hi[d] - lo[d]);
    return v;
}

bool QuantileBox::contains(std::span<const double> u) const {
    for (std::size_t d = 0; d < lo.size(); ++d) {
        if (!(u[d] > lo[d] && u[d] <= hi[d])) return false;
    }
    return true;
}

QuantileBoxSet QuantileBoxSet::unit(std::size_t dim) {
    QuantileBox b{std::vector<double>(dim, 0.0), std::vector<double>(dim, 1.0)};
    return of(std::move(b));
}

QuantileBoxSet QuantileBoxSet::of(QuantileBox box) {
    QuantileBoxSet s;
    if (box.volume() > 0.0) s.boxes_.push_back(std::move(box));
    return s;
}

void QuantileBoxSet::subtract(const QuantileBox& cut) {
    std::vector<QuantileBox> out;
    for (const QuantileBox& b : boxes_) {
        bool overlaps = true;
        for (std::size_t d = 0; d < b.lo.size(); ++d) {
            if (cut.lo[d] >= b.hi[d] || cut.hi[d] <= b.lo[d]) {
                overlaps = false;
                break;
            }
        }
        if (!overlaps) {
            out.push_back(b);
            continue;
        }
        QuantileBox rest = b;
        for (std::size_t d = 0; d < b.lo.size(); ++d) {
            if (cut.lo[d] > rest.lo[d]) {
                QuantileBox piece = rest;
                piece.hi[d] = cut.lo[d];
                if (piece.volume() > 0.0) out.push_back(std::move(piece));
                rest.lo[d] = cut.lo[d];
            }
            if (cut.hi[d] < rest.hi[d]) {
                QuantileBox piece = rest;
                piece.lo[d] = cut.hi[d];
                if (piece.volume() > 0.0) out.push_back(std::move(piece));
                rest.hi[d] = cut.hi[d];
            }
        }
        // rest is fully inside cut: dropped
    }
    boxes_ = std::move(out);
}

void QuantileBoxSet::subtract(const QuantileBoxSet& cuts) {
    for (const QuantileBox& c : cuts.boxes_) subtract(c);
}

void QuantileBoxSet::unite_disjoint(const QuantileBoxSet& other) {
    boxes_.insert(boxes_.end(), other.boxes_.begin(), other.boxes_.end());
}

void QuantileBoxSet::clip_above(std::size_t dim, double g) {
    std::vector<QuantileBox> out;
    for (QuantileBox b : boxes_) {
        b.lo[dim] = std::max(b.lo[dim], g);
        if (b.volume() > 0.0) out.push_back(std::move(b));
    }
    boxes_ = std::move(out);
}

double QuantileBoxSet::volume() const {
    double v = 0.0;
    for (const QuantileBox& b : boxes_) v += b.volume();
    return v;
}

double QuantileBoxSet::intersection_volume(const QuantileBoxSet& other) const {
    double v = 0.0;
    for (const QuantileBox& a : boxes_) {
        for (const QuantileBox& b : other.boxes_) {
            double piece = 1.0;
            for (std::size_t d = 0; d < a.lo.size(); ++d) {
                piece *= std::max(0.0, std::min(a.hi[d], b.hi[d]) - std::max(a.lo[d], b.lo[d]));
                if (piece == 0.0) break;
            }
            v += piece;
        }
    }
    return v;
}

bool QuantileBoxSet::contains(std::span<const double> u) const {
    for (const QuantileBox& b : boxes_) {
        if (b.contains(u)) return true;
    }
    return false;
}

namespace {

/// Original stage event A_k as a box in quantile space.
QuantileBox stage_event_box(const std::vector<double>& ratios, std::size_t k, std::size_t r) {
    const std::size_t dim = r - 1;
    QuantileBox b{std::vector<double>(dim, 0.0), std::vector<double>(dim, 1.0)};
    for (std::size_t j = 0; j + 1 < k; ++j) b.lo[j] = ratios[j];
    if (k < r) b.hi[k - 1] = ratios[k - 1];
    return b;
}

/// Smallest g with vol(set ∩ {u_dim > g}) = target. The volume is a
/// piecewise-linear decreasing function of g with breakpoints at the box
/// edges, so the solve is exact.
double solve_threshold(const QuantileBoxSet& set, std::size_t dim, double target) {
    std::vector<double> edges{0.0, 1.0};
    for (const QuantileBox& b : set.boxes()) {
        edges.push_back(b.lo[dim]);
        edges.push_back(b.hi[dim]);
    }
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

    auto vol_above = [&](double g) {
        double v = 0.0;
        for (const QuantileBox& b : set.boxes()) {
            double piece = std::max(0.0, b.hi[dim] - std::max(b.lo[dim], g));
            for (std::size_t d = 0; d < b.lo.size(); ++d) {
                if (d != dim) piece *= b.hi[d] - b.lo[d];
            }
            v += piece;
        }
        return v;
    };

    for (std::size_t i = edges.size(); i-- > 1;) {
        const double va = vol_above(edges[i - 1]);
        const double vb = vol_above(edges[i]);
        if (target > vb + 1e-15 && target <= va + 1e-15) {
            if (va == vb) return edges[i - 1];
            const double s = (va - target) / (va - vb);
            return edges[i - 1] + s * (edges[i] - edges[i - 1]);
        }
    }
    return 0.0; // target >= total volume: keep everything
}

} // namespace

double coupling_bound(const AtomicDistribution& mu, const std::vector<double>& p_prime) {
    double l1 = 0.0;
    for (std::size_t k = 0; k < mu.atom_count(); ++k) {
        l1 += std::abs(mu.weights[k] - p_prime[k]);
    }
    return std::pow(4.0, static_cast<double>(mu.atom_count())) * l1;
}

CoupledConstruction couple_stopping_time(const ThresholdSchedule& schedule,
                                         const std::vector<double>& p_prime) {
    const std::size_t r = schedule.mu.atom_count();
    if (p_prime.size() != r) {
        throw Error(ErrorCode::WeightMismatch, "perturbed weights need one entry per atom");
    }
    double sum = 0.0;
    for (double p : p_prime) {
        if (p < 0.0 || p > 1.0) {
            throw Error(ErrorCode::WeightMismatch, "perturbed weights must lie in [0,1]");
        }
        sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-9) {
        throw Error(ErrorCode::WeightMismatch, "perturbed weights must sum to 1");
    }

    const std::size_t dim = r - 1;
    CoupledConstruction c;
    c.base = schedule;
    c.p_prime = p_prime;
    c.prime_events.reserve(r);
    c.stage_symdiff.assign(r, 0.0);

    QuantileBoxSet used; // events assigned so far
    double matched = 0.0;
    for (std::size_t k = 1; k <= r; ++k) {
        const QuantileBox a_k = stage_event_box(schedule.tail_ratios, k, r);
        QuantileBoxSet prime;
        if (k == r) {
            prime = QuantileBoxSet::unit(dim);
            prime.subtract(used);
        } else {
            QuantileBoxSet core = QuantileBoxSet::of(a_k);
            core.subtract(used);
            const double q_k = core.volume();
            const double target = p_prime[k - 1];
            if (std::abs(q_k - target) <= 1e-15) {
                prime = core;
            } else if (q_k < target) {
                QuantileBoxSet avail = QuantileBoxSet::unit(dim);
                avail.subtract(used);
                avail.subtract(core);
                const double g = solve_threshold(avail, k - 1, target - q_k);
                avail.clip_above(k - 1, g);
                prime = core;
                prime.unite_disjoint(avail);
            } else {
                const double w = solve_threshold(core, k - 1, target);
                core.clip_above(k - 1, w);
                prime = core;
            }
        }

        const QuantileBoxSet a_set = QuantileBoxSet::of(a_k);
        const double inter = a_set.intersection_volume(prime);
        matched += inter;
        c.stage_symdiff[k - 1] = a_set.volume() + prime.volume() - 2.0 * inter;
        used.unite_disjoint(prime);
        c.prime_events.push_back(std::move(prime));
    }
    c.mismatch_probability = std::max(0.0, 1.0 - matched);
    return c;
}

CoupledSample sample_coupled(const CoupledConstruction& coupling, double x0, CounterRng& rng) {
    const ScheduleDraw draw = draw_schedule_uniforms(coupling.base, rng);
    CoupledSample out;
    out.tau = realize_sample(coupling.base, draw, x0);

    std::size_t atom_prime = coupling.base.mu.atom_count();
    for (std::size_t k = 0; k < coupling.prime_events.size(); ++k) {
        if (coupling.prime_events[k].contains(draw.u_stats)) {
            atom_prime = k + 1;
            break;
        }
    }
    // Same driving noise: reuse the draw, overriding only the classification.
    ScheduleDraw forced = draw;
    out.tau_prime = realize_sample(coupling.base, forced, x0);
    out.tau_prime.atom_index = atom_prime;
    out.tau_prime.stop_time = coupling.base.mu.times[atom_prime - 1];
    // Recompute the stopped value for the forced atom.
    {
        const auto& mu = coupling.base.mu;
        const std::size_t r = mu.atom_count();
        double w = 0.0;
        for (std::size_t k = 1; k <= atom_prime; ++k) {
            const double scale = std::sqrt(mu.stage_gap(k));
            double u;
            if (coupling.base.kind == ScheduleKind::GaussianIncrement) {
                u = k < r ? draw.u_stats[k - 1] : draw.u_path[0];
            } else {
                u = draw.u_path[k - 1];
            }
            w += scale * inverse_normal_cdf(u);
        }
        out.tau_prime.terminal_x = x0 + w;
        const std::size_t mark_count = r == 1 ? 0 : std::min(atom_prime, r - 1);
        out.tau_prime.marks.resize(mark_count);
        for (std::size_t k = 0; k < mark_count; ++k) {
            out.tau_prime.marks[k] =
                coupling.base.kind == ScheduleKind::GaussianIncrement
                    ? std::sqrt(mu.stage_gap(k + 1)) * inverse_normal_cdf(draw.u_stats[k])
                    : bridge_max_cdf_inv(draw.u_stats[k]);
        }
    }
    return out;
}

} // namespace dcstop
