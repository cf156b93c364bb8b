#include "refgame_cli/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "refgame/analysis.hpp"
#include "refgame/mnl_model.hpp"

namespace refgame::cli {
namespace {

double rel_error(double analytic, double fd) {
    return std::abs(analytic - fd) / std::max(1.0, std::abs(analytic));
}

double log_revenue(const MarketParams& params, Firm i, const PricePair& p, const PricePair& r) {
    return std::log(revenue(params, p, r)[i]);
}

/// Central difference of f in the coordinate selected by `slot`.
template <class F>
double central(F&& f, double& slot, double h) {
    const double saved = slot;
    slot = saved + h;
    const double up = f();
    slot = saved - h;
    const double down = f();
    slot = saved;
    return (up - down) / (2.0 * h);
}

}  // namespace

MarketParams random_instance(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> a_dist(0.0, 12.0);
    std::uniform_real_distribution<double> s_dist(0.1, 3.0);
    std::uniform_real_distribution<double> alpha_dist(0.0, 0.99);
    MarketParams m;
    m.firm_h.a = a_dist(rng);
    m.firm_h.b = s_dist(rng);
    m.firm_h.c = s_dist(rng);
    m.firm_l.a = a_dist(rng);
    m.firm_l.b = s_dist(rng);
    m.firm_l.c = s_dist(rng);
    m.alpha = alpha_dist(rng);
    m.p_lo = 1.0;
    m.p_hi = 2.0;
    const FirmBounds b = sne_bounds(m);
    m.p_lo = 0.9 * std::min(b.h.lower, b.l.lower);
    m.p_hi = 1.1 * std::max(b.h.upper, b.l.upper);
    return m;
}

MarketState random_state(const MarketParams& params, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(params.p_lo, params.p_hi);
    MarketState s;
    s.prices.h = u(rng);
    s.prices.l = u(rng);
    s.references.h = u(rng);
    s.references.l = u(rng);
    return s;
}

PropertyResult check_gradients(const MarketParams& params, int states, std::mt19937_64& rng) {
    PropertyResult res{"gradient_vs_finite_difference"};
    for (int k = 0; k < states; ++k) {
        MarketState s = random_state(params, rng);
        PricePair& p = s.prices;
        PricePair& r = s.references;
        const PricePair d = log_rev_derivative(params, p, r);
        const GPartials g = partials_G(params, p, r);
        double worst = 0.0;
        for (Firm i : kFirms) {
            const Firm j = rival(i);
            auto logrev = [&] { return log_revenue(params, i, p, r); };
            auto gi = [&] { return scaled_derivative(params, p, r)[i]; };
            worst = std::max(worst, rel_error(d[i], central(logrev, p[i], kFdStep)));
            worst = std::max(worst, rel_error(g[i].own_price, central(gi, p[i], kFdStep)));
            worst = std::max(worst, rel_error(g[i].rival_price, central(gi, p[j], kFdStep)));
            worst = std::max(worst, rel_error(g[i].own_reference, central(gi, r[i], kFdStep)));
            worst = std::max(worst, rel_error(g[i].rival_reference, central(gi, r[j], kFdStep)));
        }
        res.worst = std::max(res.worst, worst);
        res.record(worst < kFdTolerance);
    }
    return res;
}

PropertyResult check_bound_constants(const MarketParams& params, int states, std::mt19937_64& rng) {
    PropertyResult res{"bound_constants"};
    const BoundConstants k = bound_constants(params);
    for (int n = 0; n < states; ++n) {
        const MarketState s = random_state(params, rng);
        const PricePair g = scaled_derivative(params, s.prices, s.references);
        const GPartials part = partials_G(params, s.prices, s.references);
        bool ok = true;
        for (Firm i : kFirms) {
            const double ref_grad = std::hypot(part[i].own_reference, part[i].rival_reference);
            ok = ok && std::abs(g[i]) <= k.gradient_bound && ref_grad <= k.reference_lipschitz;
            res.worst = std::max({res.worst, std::abs(g[i]) / k.gradient_bound, ref_grad / k.reference_lipschitz});
        }
        res.record(ok);
    }
    return res;
}

PropertyResult check_g_positivity(const MarketParams& params, const PricePair& sne, int grid,
                                  double exclusion) {
    PropertyResult res{"drift_positivity"};
    res.worst = std::numeric_limits<double>::infinity();
    const double step = (params.p_hi - params.p_lo) / (grid - 1);
    for (int i = 0; i < grid; ++i) {
        for (int j = 0; j < grid; ++j) {
            const PricePair p{params.p_lo + step * i, params.p_lo + step * j};
            if (std::hypot(p.h - sne.h, p.l - sne.l) < exclusion) {
                continue;
            }
            const double g = signed_drift(params, p, sne);
            res.worst = std::min(res.worst, g);
            res.record(g > 0.0);
        }
    }
    return res;
}

PropertyResult check_shell_monotonicity(const MarketParams& params, const PricePair& sne) {
    PropertyResult res{"shell_monotonicity"};
    // Largest shell that fits in the box in every direction.
    double room = std::numeric_limits<double>::infinity();
    for (Firm i : kFirms) {
        const double s = params.firm(i).sensitivity();
        room = std::min({room, (sne[i] - params.p_lo) / s, (params.p_hi - sne[i]) / s});
    }
    const double eps_values[] = {0.25 * room, 0.5 * room, room};
    double previous = -std::numeric_limits<double>::infinity();
    res.worst = std::numeric_limits<double>::infinity();
    for (double eps : eps_values) {
        const double m = shell_minimum(params, sne, eps);
        res.record(m > previous && m > 0.0);
        res.worst = std::min(res.worst, m - previous);
        previous = m;
    }
    return res;
}

std::array<std::array<double, 2>, 2> fd_hessian_H(const MarketParams& params, const PricePair& sne,
                                                  const PricePair& at, double h) {
    auto f = [&](double dh, double dl) { return drift_potential(params, {at.h + dh, at.l + dl}, sne); };
    const double f0 = f(0.0, 0.0);
    std::array<std::array<double, 2>, 2> m{};
    m[0][0] = (f(h, 0.0) - 2.0 * f0 + f(-h, 0.0)) / (h * h);
    m[1][1] = (f(0.0, h) - 2.0 * f0 + f(0.0, -h)) / (h * h);
    m[0][1] = (f(h, h) - f(h, -h) - f(-h, h) + f(-h, -h)) / (4.0 * h * h);
    m[1][0] = m[0][1];
    return m;
}

PropertyResult check_hessian(const MarketParams& params, const PricePair& sne) {
    PropertyResult res{"hessian_certificate"};
    const HessianCertificate cert = hessian_certificate(params, sne);
    const auto fd = fd_hessian_H(params, sne, sne, 1e-4);
    double scale = 0.0;
    for (const auto& row : cert.matrix) {
        for (double x : row) {
            scale = std::max(scale, std::abs(x));
        }
    }
    double worst = 0.0;
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            worst = std::max(worst, std::abs(cert.matrix[i][j] - fd[i][j]) / scale);
        }
    }
    res.worst = worst;
    res.record(cert.matrix[0][1] == cert.matrix[1][0] && cert.det > 0.0 && cert.trace > 0.0 &&
               worst < 1e-5);
    return res;
}

}  // namespace refgame::cli
