#include "refgame/equilibrium.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "refgame/mnl_model.hpp"

namespace refgame {
namespace {

bool strictly_inside(double x, const MarketParams& params) {
    return x > params.p_lo && x < params.p_hi;
}

/// Damping values tried in order: the configured one, then 0.5, 0.25, ...
std::vector<double> damping_sequence(double first) {
    std::vector<double> seq{first};
    for (double w = std::min(0.5, first * 0.5); w >= kMinSneDamping; w *= 0.5) {
        seq.push_back(w);
    }
    return seq;
}

/// Own log-revenue derivative and its slope in the own price.
struct OwnDerivative {
    double value;
    double slope;
};

OwnDerivative own_derivative(const MarketParams& params, Firm firm, double price,
                             double opponent_price, const PricePair& r) {
    PricePair p;
    p[firm] = price;
    p[rival(firm)] = opponent_price;
    const Demand d = demand(params, p, r);
    const double s = params.firm(firm).sensitivity();
    const double di = d[firm];
    return {1.0 / price + s * (di - 1.0), -1.0 / (price * price) - s * s * di * (1.0 - di)};
}

PricePair sne_map(const MarketParams& params, const PricePair& p) {
    const Demand d = demand(params, p, p);
    return {1.0 / (params.firm_h.sensitivity() * (1.0 - d.h)),
            1.0 / (params.firm_l.sensitivity() * (1.0 - d.l))};
}

}  // namespace

void SolverConfig::validate() const {
    if (!(tolerance > 0.0)) {
        throw DomainError("solver tolerance must be positive");
    }
    if (max_iterations < 1) {
        throw DomainError("solver iteration cap must be at least 1");
    }
    if (!(damping > 0.0 && damping <= 1.0)) {
        throw DomainError("damping must lie in (0, 1]");
    }
}

double lambert_w(double x) {
    if (std::isnan(x) || x < 0.0) {
        throw DomainError("lambert_w is defined here only for x >= 0");
    }
    if (x == 0.0) {
        return 0.0;
    }
    if (std::isinf(x)) {
        return x;
    }
    double w;
    if (x > std::numbers::e) {
        const double lx = std::log(x);
        w = lx - std::log(lx);
    } else {
        w = std::log1p(x);
    }
    // Halley iteration on f(w) = w e^w - x.
    for (int k = 0; k < 100; ++k) {
        const double ew = std::exp(w);
        const double f = w * ew - x;
        const double fp = ew * (w + 1.0);
        const double step = f / (fp - (w + 2.0) * f / (2.0 * w + 2.0));
        w -= step;
        if (std::abs(step) <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, w)) {
            break;
        }
    }
    return w;
}

FirmBounds sne_bounds(const MarketParams& params) {
    auto one = [](const FirmParams& f) {
        const double s = f.sensitivity();
        const double k = f.b / s;
        const double arg = k * std::exp(f.a - k);
        if (!std::isfinite(arg)) {
            throw DomainError("equilibrium upper bound overflows for this intrinsic value");
        }
        return SneBounds{1.0 / s, 1.0 / s + lambert_w(arg) / f.b};
    };
    return {one(params.firm_h), one(params.firm_l)};
}

std::string BoxCheck::describe() const {
    std::ostringstream os;
    os.precision(17);
    for (const BoxViolation& v : violations) {
        if (v.side == BoxViolation::Side::Lower) {
            os << "p_lo = " << v.actual << " but must be <= " << v.required << "\n";
        } else {
            os << "p_hi = " << v.actual << " but must be >= " << v.required << "\n";
        }
    }
    return os.str();
}

BoxCheck validate_price_box(const MarketParams& params) {
    const FirmBounds b = sne_bounds(params);
    const double need_lo = std::min(b.h.lower, b.l.lower);
    const double need_hi = std::max(b.h.upper, b.l.upper);
    BoxCheck check;
    if (!(params.p_lo <= need_lo)) {
        check.violations.push_back({BoxViolation::Side::Lower, params.p_lo, need_lo});
    }
    if (!(params.p_hi >= need_hi)) {
        check.violations.push_back({BoxViolation::Side::Upper, params.p_hi, need_hi});
    }
    return check;
}

double best_response(const MarketParams& params, Firm firm, double opponent_price,
                     const PricePair& r, const SolverConfig& cfg) {
    double lo = params.p_lo;
    double hi = params.p_hi;
    const OwnDerivative at_lo = own_derivative(params, firm, lo, opponent_price, r);
    if (at_lo.value <= 0.0) {
        return lo;
    }
    const OwnDerivative at_hi = own_derivative(params, firm, hi, opponent_price, r);
    if (at_hi.value >= 0.0) {
        return hi;
    }

    double x = 0.5 * (lo + hi);
    for (std::int64_t k = 0; k < cfg.max_iterations; ++k) {
        const OwnDerivative g = own_derivative(params, firm, x, opponent_price, r);
        if (std::abs(g.value) <= cfg.tolerance) {
            return x;
        }
        if (g.value > 0.0) {
            lo = x;
        } else {
            hi = x;
        }
        if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * hi) {
            // Bracket collapsed to a few ulps; the derivative cannot be resolved further.
            return x;
        }
        double next = x - g.value / g.slope;
        if (!(next > lo && next < hi)) {
            next = 0.5 * (lo + hi);
        }
        x = next;
    }
    throw SolverFailure(std::string("best response for firm ") + to_string(firm) +
                            " did not converge",
                        lo, hi);
}

double policy_residual(const MarketParams& params, const PricePair& p, const PricePair& r) {
    const Demand d = demand(params, p, r);
    double worst = 0.0;
    for (Firm i : kFirms) {
        if (!strictly_inside(p[i], params)) {
            continue;
        }
        const double target = 1.0 / (params.firm(i).sensitivity() * (1.0 - d[i]));
        worst = std::max(worst, std::abs(p[i] - target));
    }
    return worst;
}

double sne_residual(const MarketParams& params, const PricePair& p) {
    const PricePair t = sne_map(params, p);
    return std::max(std::abs(t.h - p.h), std::abs(t.l - p.l));
}

PricePair equilibrium_policy(const MarketParams& params, const PricePair& r,
                             const SolverConfig& cfg) {
    cfg.validate();
    const PricePair start{project(r.h, params.p_lo, params.p_hi),
                          project(r.l, params.p_lo, params.p_hi)};
    for (double w : damping_sequence(cfg.damping)) {
        PricePair p = start;
        for (std::int64_t k = 0; k < cfg.max_iterations; ++k) {
            const PricePair br{best_response(params, Firm::H, p.l, r, cfg),
                               best_response(params, Firm::L, p.h, r, cfg)};
            const double change = std::max(std::abs(br.h - p.h), std::abs(br.l - p.l));
            if (change <= cfg.tolerance) {
                return br;
            }
            p.h = (1.0 - w) * p.h + w * br.h;
            p.l = (1.0 - w) * p.l + w * br.l;
        }
    }
    throw SolverFailure("equilibrium policy iteration did not converge");
}

bool SneSolution::within_bounds() const noexcept {
    return bounds.h.lower < prices.h && prices.h < bounds.h.upper && bounds.l.lower < prices.l &&
           prices.l < bounds.l.upper;
}

SneSolution solve_sne(const MarketParams& params, const SolverConfig& cfg) {
    params.validate();
    cfg.validate();
    const BoxCheck box = validate_price_box(params);
    if (!box.ok()) {
        throw DomainError("price box does not contain the equilibrium bounds:\n" + box.describe());
    }

    const double mid = 0.5 * (params.p_lo + params.p_hi);
    for (double w : damping_sequence(cfg.damping)) {
        PricePair p{mid, mid};
        for (std::int64_t k = 0; k < cfg.max_iterations; ++k) {
            const PricePair t = sne_map(params, p);
            const double defect = std::max(std::abs(t.h - p.h), std::abs(t.l - p.l));
            if (!std::isfinite(defect)) {
                break;
            }
            if (defect <= cfg.tolerance) {
                SneSolution sol;
                sol.prices = p;
                sol.residual = defect;
                sol.iterations = k;
                sol.damping = w;
                sol.bounds = sne_bounds(params);
                sol.hessian = hessian_certificate(params, p);
                return sol;
            }
            p.h = project((1.0 - w) * p.h + w * t.h, params.p_lo, params.p_hi);
            p.l = project((1.0 - w) * p.l + w * t.l, params.p_lo, params.p_hi);
        }
    }
    throw SolverFailure("stationary equilibrium iteration did not converge");
}

Trajectory equilibrium_path(const MarketParams& params, const PricePair& r0, std::int64_t horizon,
                            const SolverConfig& cfg) {
    params.validate();
    if (horizon < 1) {
        throw DomainError("horizon must be at least 1");
    }
    if (!(r0.h >= params.p_lo && r0.h <= params.p_hi && r0.l >= params.p_lo &&
          r0.l <= params.p_hi)) {
        throw DomainError("initial reference price must lie inside the price box");
    }
    Trajectory traj;
    traj.params = params;
    traj.schedule = "equilibrium_policy";
    traj.records.reserve(static_cast<std::size_t>(horizon) + 1);

    PricePair r = r0;
    for (std::int64_t t = 0; t <= horizon; ++t) {
        PricePair p;
        try {
            p = equilibrium_policy(params, r, cfg);
        } catch (const SolverFailure& e) {
            throw SolverFailure(std::string(e.what()) + " at period " + std::to_string(t),
                                e.bracket_lo(), e.bracket_hi());
        }
        TrajectoryRecord rec;
        rec.t = t;
        rec.prices = p;
        rec.references = r;
        rec.derivatives = log_rev_derivative(params, p, r);
        rec.eta = std::numeric_limits<double>::quiet_NaN();
        traj.records.push_back(rec);
        PricePair next = reference_update(params.alpha, r, p);
        next.h = project(next.h, params.p_lo, params.p_hi);
        next.l = project(next.l, params.p_lo, params.p_hi);
        r = next;
    }
    return traj;
}

}  // namespace refgame
