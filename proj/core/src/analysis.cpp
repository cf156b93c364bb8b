#include "refgame/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "refgame/mnl_model.hpp"

namespace refgame {
namespace {

double sign(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

double dist2(const PricePair& x, const PricePair& y) {
    const double dh = x.h - y.h;
    const double dl = x.l - y.l;
    return dh * dh + dl * dl;
}

bool in_box(const MarketParams& params, const PricePair& p) {
    return p.h >= params.p_lo && p.h <= params.p_hi && p.l >= params.p_lo && p.l <= params.p_hi;
}

}  // namespace

double epsilon_l1(const MarketParams& params, const PricePair& p, const PricePair& sne) {
    return std::abs(sne.h - p.h) / params.firm_h.sensitivity() +
           std::abs(sne.l - p.l) / params.firm_l.sensitivity();
}

const char* to_string(Quadrant q) noexcept {
    switch (q) {
        case Quadrant::N1: return "N1";
        case Quadrant::N2: return "N2";
        case Quadrant::N3: return "N3";
        case Quadrant::N4: return "N4";
        case Quadrant::Origin: return "ORIGIN";
    }
    return "?";
}

Quadrant quadrant(const PricePair& p, const PricePair& sne) {
    if (p.h > sne.h && p.l >= sne.l) return Quadrant::N1;
    if (p.h <= sne.h && p.l > sne.l) return Quadrant::N2;
    if (p.h < sne.h && p.l <= sne.l) return Quadrant::N3;
    if (p.h >= sne.h && p.l < sne.l) return Quadrant::N4;
    return Quadrant::Origin;
}

double signed_drift(const MarketParams& params, const PricePair& p, const PricePair& sne) {
    const PricePair g = scaled_derivative(params, p, p);
    return sign(sne.h - p.h) * g.h + sign(sne.l - p.l) * g.l;
}

double drift_potential(const MarketParams& params, const PricePair& p, const PricePair& sne) {
    const PricePair g = scaled_derivative(params, p, p);
    return params.firm_h.sensitivity() * g.h * (sne.h - p.h) +
           params.firm_l.sensitivity() * g.l * (sne.l - p.l);
}

HessianCertificate hessian_certificate(const MarketParams& params, const PricePair& sne) {
    const Demand d = demand(params, sne, sne);
    const FirmParams& fh = params.firm_h;
    const FirmParams& fl = params.firm_l;
    const double sh = fh.sensitivity();
    const double sl = fl.sensitivity();

    HessianCertificate cert;
    const double off = -(fh.b * sl + fl.b * sh) * d.h * d.l;
    cert.matrix[0][0] = 2.0 * sh * (1.0 - d.h) * (sh - fh.c * d.h);
    cert.matrix[1][1] = 2.0 * sl * (1.0 - d.l) * (sl - fl.c * d.l);
    cert.matrix[0][1] = off;
    cert.matrix[1][0] = off;

    const double a = cert.matrix[0][0];
    const double c = cert.matrix[1][1];
    cert.det = a * c - off * off;
    cert.trace = a + c;
    // Smallest eigenvalue of a symmetric 2x2 matrix.
    const double half_gap = std::hypot(0.5 * (a - c), off);
    cert.min_eigenvalue = 0.5 * (a + c) - half_gap;
    cert.gamma_estimate = 0.5 * cert.min_eigenvalue;
    return cert;
}

double quadratic_growth_radius(const MarketParams& params, const PricePair& sne,
                               const HessianCertificate& cert, int samples) {
    const double threshold = cert.min_eigenvalue / 4.0;
    auto passes = [&](double rho) {
        for (double scale : {1.0, 0.5, 0.25, 0.125}) {
            const double radius = rho * scale;
            for (int k = 0; k < samples; ++k) {
                const double theta = 2.0 * std::numbers::pi * k / samples;
                const PricePair p{sne.h + radius * std::cos(theta), sne.l + radius * std::sin(theta)};
                if (!in_box(params, p)) {
                    continue;
                }
                if (drift_potential(params, p, sne) < threshold * dist2(p, sne)) {
                    return false;
                }
            }
        }
        return true;
    };
    for (double rho = 0.1 * (params.p_hi - params.p_lo); rho > 1e-8; rho *= 0.5) {
        if (passes(rho)) {
            return rho;
        }
    }
    return 0.0;
}

double shell_minimum(const MarketParams& params, const PricePair& sne, double eps, int samples) {
    const double sh = params.firm_h.sensitivity();
    const double sl = params.firm_l.sensitivity();
    double best = std::numeric_limits<double>::infinity();
    for (int k = 0; k < samples; ++k) {
        // Walk the diamond |x| + |y| = 1 with a parameter s in [0, 4).
        const double s = 4.0 * k / samples;
        const int side = static_cast<int>(s);
        const double u = s - side;
        double x = 0.0;
        double y = 0.0;
        switch (side) {
            case 0: x = 1.0 - u; y = u; break;
            case 1: x = -u; y = 1.0 - u; break;
            case 2: x = u - 1.0; y = -u; break;
            default: x = u; y = u - 1.0; break;
        }
        const PricePair p{sne.h + sh * eps * x, sne.l + sl * eps * y};
        if (!in_box(params, p)) {
            continue;
        }
        best = std::min(best, signed_drift(params, p, sne));
    }
    return best;
}

RateConstants rate_constants(const MarketParams& params, double gamma_estimate) {
    if (!(gamma_estimate > 0.0)) {
        throw DomainError("gamma estimate must be positive");
    }
    const double alpha = params.alpha;
    if (!(alpha >= 0.0 && alpha < 1.0)) {
        throw DomainError("rate constants require 0 <= alpha < 1");
    }
    const BoundConstants k = bound_constants(params);
    const double sh = params.firm_h.sensitivity();
    const double sl = params.firm_l.sensitivity();
    const double sum_s2 = sh * sh + sl * sl;
    const double a2 = alpha * alpha;

    RateConstants out;
    out.contraction = 0.5 * (1.0 + a2);
    out.step_error_coefficient = k.gradient_bound * k.gradient_bound * sum_s2;
    out.gap_coefficient = (1.0 + a2) / (1.0 - a2) * out.step_error_coefficient;
    const double root_up = std::sqrt(out.contraction + 1.0);
    out.gap_onset = root_up / (root_up - std::sqrt(2.0 * out.contraction));
    out.reference_drift_coefficient = 2.0 * k.reference_lipschitz * std::abs(params.p_hi - params.p_lo) * (sh + sl);
    out.gamma_estimate = gamma_estimate;
    out.step_scale = 2.0 / gamma_estimate;
    return out;
}

RateReport rate_window(const Trajectory& traj, const PricePair& sne, std::int64_t t_start,
                       std::int64_t t_end, double threshold) {
    if (traj.records.empty()) {
        throw DomainError("rate_window needs a non-empty trajectory");
    }
    RateReport rep;
    rep.t_start = std::max<std::int64_t>(t_start, 0);
    rep.t_end = std::min<std::int64_t>(t_end, traj.records.back().t);
    for (const TrajectoryRecord& rec : traj.records) {
        if (rec.t < rep.t_start || rec.t > rep.t_end) {
            continue;
        }
        const double t = static_cast<double>(rec.t);
        rep.sup_t_dist2 = std::max(rep.sup_t_dist2, t * dist2(sne, rec.prices));
        rep.sup_t2_gap2 = std::max(rep.sup_t2_gap2, t * t * dist2(rec.references, rec.prices));
    }
    const PricePair& last = traj.records.back().prices;
    rep.converged = std::max(std::abs(sne.h - last.h), std::abs(sne.l - last.l)) < threshold;
    return rep;
}

RateReport rate_fit(const Trajectory& traj, const PricePair& sne, double window_fraction,
                    double threshold) {
    if (!(window_fraction > 0.0 && window_fraction <= 1.0)) {
        throw DomainError("window fraction must lie in (0, 1]");
    }
    if (traj.records.empty()) {
        throw DomainError("rate_fit needs a non-empty trajectory");
    }
    const std::int64_t t_end = traj.records.back().t;
    const auto span = static_cast<std::int64_t>(std::ceil(window_fraction * static_cast<double>(t_end)));
    return rate_window(traj, sne, t_end - span, t_end, threshold);
}

const char* to_string(CycleVerdict v) noexcept {
    switch (v) {
        case CycleVerdict::Converged: return "CONVERGED";
        case CycleVerdict::Cycling: return "CYCLING";
        case CycleVerdict::Undecided: return "UNDECIDED";
    }
    return "?";
}

CycleVerdict cycle_detector(const Trajectory& traj, const PricePair& sne, double tail_fraction) {
    if (!(tail_fraction > 0.0 && tail_fraction < 1.0)) {
        throw DomainError("tail fraction must lie in (0, 1)");
    }
    const std::size_t n = traj.records.size();
    const auto tail_len = std::max<std::size_t>(
        2, static_cast<std::size_t>(std::ceil(tail_fraction * static_cast<double>(n))));
    if (n < 2) {
        return CycleVerdict::Undecided;
    }
    const std::size_t begin = n - std::min(tail_len, n);

    double min_dist = std::numeric_limits<double>::infinity();
    double max_dist = 0.0;
    std::vector<double> dist;
    dist.reserve(n - begin);
    for (std::size_t k = begin; k < n; ++k) {
        const double d = std::sqrt(dist2(traj.records[k].prices, sne));
        dist.push_back(d);
        min_dist = std::min(min_dist, d);
        max_dist = std::max(max_dist, d);
    }
    if (max_dist < kConvergedDistance) {
        return CycleVerdict::Converged;
    }
    if (min_dist <= kCyclingMinDistance || dist.size() < 4) {
        return CycleVerdict::Undecided;
    }

    int reversals = 0;
    double prev_step = 0.0;
    for (std::size_t k = 1; k < dist.size(); ++k) {
        const double step = dist[k] - dist[k - 1];
        if (step != 0.0) {
            if (prev_step != 0.0 && (step > 0.0) != (prev_step > 0.0)) {
                ++reversals;
            }
            prev_step = step;
        }
    }
    if (reversals < 2) {
        return CycleVerdict::Undecided;
    }

    const std::size_t mid = dist.size() / 2;
    const double first = *std::max_element(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(mid));
    const double second = *std::max_element(dist.begin() + static_cast<std::ptrdiff_t>(mid), dist.end());
    const double ratio = second / first;
    return (ratio >= 0.5 && ratio <= 2.0) ? CycleVerdict::Cycling : CycleVerdict::Undecided;
}

}  // namespace refgame
