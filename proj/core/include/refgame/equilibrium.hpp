#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "refgame/analysis.hpp"
#include "refgame/game_dynamics.hpp"
#include "refgame/types.hpp"

namespace refgame {

struct SolverConfig {
    double tolerance = 1e-12;
    std::int64_t max_iterations = 100'000;
    /// Relaxation weight of the fixed-point map, in (0, 1].
    double damping = 1.0;

    void validate() const;
};

/// Principal branch of the Lambert W function on [0, inf): w >= 0 with w e^w = x.
double lambert_w(double x);

struct SneBounds {
    double lower = 0.0;
    double upper = 0.0;
};

struct FirmBounds {
    SneBounds h;
    SneBounds l;

    constexpr const SneBounds& operator[](Firm i) const noexcept { return i == Firm::H ? h : l; }
};

/// Per-firm open interval containing the SNE price:
/// lower = 1/(b+c), upper = lower + W(b/(b+c) exp(a - b/(b+c))) / b.
FirmBounds sne_bounds(const MarketParams& params);

struct BoxViolation {
    enum class Side { Lower, Upper };
    Side side;
    double actual;
    double required;
};

struct BoxCheck {
    std::vector<BoxViolation> violations;

    bool ok() const noexcept { return violations.empty(); }
    /// One line per violation, e.g. "p_hi = 7 but must be >= 7.3785...".
    std::string describe() const;
};

/// The box must satisfy p_lo <= min_i lower_i and p_hi >= max_i upper_i.
BoxCheck validate_price_box(const MarketParams& params);

/// Revenue-maximizing price of `firm` on [p_lo, p_hi] given the rival's price and the
/// references. Found as the root of the (strictly decreasing) log-revenue derivative by
/// bracketed Newton; returns an endpoint when the derivative has no sign change.
double best_response(const MarketParams& params, Firm firm, double opponent_price,
                     const PricePair& r, const SolverConfig& cfg = {});

/// Single-period Nash equilibrium p*(r) by iterated simultaneous best responses.
PricePair equilibrium_policy(const MarketParams& params, const PricePair& r,
                             const SolverConfig& cfg = {});

/// max_i |p_i - 1/((b_i+c_i)(1 - d_i(p, r)))| over the components of p strictly inside
/// the box.
double policy_residual(const MarketParams& params, const PricePair& p, const PricePair& r);

/// max_i |p_i - 1/((b_i+c_i)(1 - d_i(p, p)))|.
double sne_residual(const MarketParams& params, const PricePair& p);

struct SneSolution {
    PricePair prices;
    double residual = 0.0;
    std::int64_t iterations = 0;
    /// Damping weight of the attempt that converged.
    double damping = 1.0;
    FirmBounds bounds;
    HessianCertificate hessian;

    /// lower_i < p_i < upper_i for both firms.
    bool within_bounds() const noexcept;
};

/// Stationary Nash equilibrium by damped fixed-point iteration on
/// p_i <- 1/((b_i+c_i)(1 - d_i(p, p))) from the box midpoint. If the configured damping
/// fails, the solve restarts with damping 0.5 and keeps halving down to kMinSneDamping.
SneSolution solve_sne(const MarketParams& params, const SolverConfig& cfg = {});

inline constexpr double kMinSneDamping = 1.0 / 1024.0;

/// Full-information baseline: p^t = p*(r^t) and r^{t+1} = alpha r^t + (1 - alpha) p^t.
Trajectory equilibrium_path(const MarketParams& params, const PricePair& r0, std::int64_t horizon,
                            const SolverConfig& cfg = {});

}  // namespace refgame
