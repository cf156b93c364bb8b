#pragma once

#include "refgame/types.hpp"

namespace refgame {

/// Deterministic utility u = a - b*p + c*(r - p).
double utility(const FirmParams& firm, double price, double reference);

struct Demand {
    double h = 0.0;
    double l = 0.0;
    double outside = 0.0;

    constexpr double operator[](Firm i) const noexcept { return i == Firm::H ? h : l; }
};

/// MNL market shares of both products and the no-purchase option.
/// Defined for any finite prices and references, not only the box.
Demand demand(const MarketParams& params, const PricePair& p, const PricePair& r);

/// Expected revenue p_i * d_i.
PricePair revenue(const MarketParams& params, const PricePair& p, const PricePair& r);

/// Derivative of log(p_i * d_i) in p_i: 1/p_i + (b_i + c_i) * (d_i - 1).
/// Each firm can evaluate its own entry from its price and realized demand alone.
PricePair log_rev_derivative(const MarketParams& params, const PricePair& p, const PricePair& r);

/// Log-revenue derivative divided by b_i + c_i.
PricePair scaled_derivative(const MarketParams& params, const PricePair& p, const PricePair& r);

/// Partial derivatives of one firm's scaled derivative.
struct GPartialsRow {
    double own_price = 0.0;
    double rival_price = 0.0;
    double own_reference = 0.0;
    double rival_reference = 0.0;
};

struct GPartials {
    GPartialsRow h;
    GPartialsRow l;

    constexpr const GPartialsRow& operator[](Firm i) const noexcept { return i == Firm::H ? h : l; }
};

GPartials partials_G(const MarketParams& params, const PricePair& p, const PricePair& r);

/// Uniform bounds over the box: |G_i| <= gradient_bound and ||grad_r G_i||_2 <= reference_lipschitz.
struct BoundConstants {
    double gradient_bound = 0.0;
    double reference_lipschitz = 0.0;
};

BoundConstants bound_constants(const MarketParams& params);

}  // namespace refgame
