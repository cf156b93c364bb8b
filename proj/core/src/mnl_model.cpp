#include "refgame/mnl_model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace refgame {
namespace {

void require_finite(double x, const char* what) {
    if (!std::isfinite(x)) {
        throw DomainError(std::string(what) + " must be finite");
    }
}

void require_nonzero_prices(const PricePair& p) {
    if (p.h == 0.0 || p.l == 0.0) {
        throw DomainError("log-revenue derivative undefined at zero price");
    }
}

}  // namespace

void MarketParams::validate() const {
    for (Firm i : kFirms) {
        const FirmParams& f = firm(i);
        if (!std::isfinite(f.a)) {
            throw DomainError(std::string("a_") + to_string(i) + " must be finite");
        }
        if (!(f.b > 0.0) || !std::isfinite(f.b)) {
            throw DomainError(std::string("b_") + to_string(i) + " must be positive");
        }
        if (!(f.c > 0.0) || !std::isfinite(f.c)) {
            throw DomainError(std::string("c_") + to_string(i) + " must be positive");
        }
    }
    if (!(alpha >= 0.0 && alpha <= 1.0)) {
        throw DomainError("alpha must lie in [0, 1]");
    }
    if (!(p_lo > 0.0) || !std::isfinite(p_hi) || !(p_lo < p_hi)) {
        throw DomainError("price box must satisfy 0 < p_lo < p_hi");
    }
}

MarketParams figure1_params() {
    MarketParams m;
    m.firm_h = {8.70, 2.00, 0.82};
    m.firm_l = {4.30, 1.20, 0.32};
    m.alpha = 0.90;
    m.p_lo = 0.1;
    m.p_hi = 7.5;
    return m;
}

MarketState figure1_initial_state() {
    return MarketState{PricePair{4.85, 4.86}, PricePair{0.10, 2.95}};
}

double utility(const FirmParams& firm, double price, double reference) {
    require_finite(price, "price");
    require_finite(reference, "reference price");
    return firm.a - firm.b * price + firm.c * (reference - price);
}

Demand demand(const MarketParams& params, const PricePair& p, const PricePair& r) {
    const double u_h = utility(params.firm_h, p.h, r.h);
    const double u_l = utility(params.firm_l, p.l, r.l);
    // Shift by the largest exponent (the outside option has utility 0).
    const double shift = std::max({0.0, u_h, u_l});
    const double e_h = std::exp(u_h - shift);
    const double e_l = std::exp(u_l - shift);
    const double e_0 = std::exp(-shift);
    const double z = e_0 + e_h + e_l;
    Demand d;
    d.h = e_h / z;
    d.l = e_l / z;
    d.outside = e_0 / z;
    return d;
}

PricePair revenue(const MarketParams& params, const PricePair& p, const PricePair& r) {
    const Demand d = demand(params, p, r);
    return {p.h * d.h, p.l * d.l};
}

PricePair log_rev_derivative(const MarketParams& params, const PricePair& p, const PricePair& r) {
    require_nonzero_prices(p);
    const Demand d = demand(params, p, r);
    PricePair out;
    for (Firm i : kFirms) {
        const double s = params.firm(i).sensitivity();
        out[i] = 1.0 / p[i] + s * (d[i] - 1.0);
    }
    return out;
}

PricePair scaled_derivative(const MarketParams& params, const PricePair& p, const PricePair& r) {
    require_nonzero_prices(p);
    const Demand d = demand(params, p, r);
    PricePair out;
    for (Firm i : kFirms) {
        const double s = params.firm(i).sensitivity();
        out[i] = 1.0 / (s * p[i]) + d[i] - 1.0;
    }
    return out;
}

GPartials partials_G(const MarketParams& params, const PricePair& p, const PricePair& r) {
    require_nonzero_prices(p);
    const Demand d = demand(params, p, r);
    auto row = [&](Firm i) {
        const Firm j = rival(i);
        const double s_i = params.firm(i).sensitivity();
        const double s_j = params.firm(j).sensitivity();
        const double own = d[i] * (1.0 - d[i]);
        const double cross = d[i] * d[j];
        GPartialsRow g;
        g.own_price = -1.0 / (s_i * p[i] * p[i]) - s_i * own;
        g.rival_price = s_j * cross;
        g.own_reference = params.firm(i).c * own;
        g.rival_reference = -params.firm(j).c * cross;
        return g;
    };
    return {row(Firm::H), row(Firm::L)};
}

BoundConstants bound_constants(const MarketParams& params) {
    const double inv_h = 1.0 / (params.firm_h.sensitivity() * params.p_lo);
    const double inv_l = 1.0 / (params.firm_l.sensitivity() * params.p_lo);
    BoundConstants k;
    k.gradient_bound = std::max(inv_h, inv_l) + 1.0;
    k.reference_lipschitz = 0.25 * std::hypot(params.firm_h.c, params.firm_l.c);
    return k;
}

}  // namespace refgame
