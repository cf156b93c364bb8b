#pragma once

#include <cstdint>
#include <random>
#include <string>

#include "refgame/equilibrium.hpp"
#include "refgame/types.hpp"

namespace refgame::cli {

struct PropertyResult {
    std::string name;
    std::int64_t passed = 0;
    std::int64_t total = 0;
    /// Largest observed error (or smallest margin), property specific.
    double worst = 0.0;

    bool ok() const noexcept { return passed == total; }
    void record(bool pass) {
        ++total;
        passed += pass ? 1 : 0;
    }
};

/// Finite-difference step used by the gradient checks.
inline constexpr double kFdStep = 1e-6;
/// |analytic - fd| / max(1, |analytic|) must stay below this.
inline constexpr double kFdTolerance = 1e-6;

/// a ~ U[0,12], b, c ~ U[0.1,3], alpha ~ U[0,0.99]; the box extends the equilibrium
/// bound thresholds by 10% (p_lo = 0.9 min lower, p_hi = 1.1 max upper).
MarketParams random_instance(std::mt19937_64& rng);

/// A uniformly drawn state in the box.
MarketState random_state(const MarketParams& params, std::mt19937_64& rng);

/// Analytic D_i and all partials of G_i against central differences on `states` states.
PropertyResult check_gradients(const MarketParams& params, int states, std::mt19937_64& rng);

/// |G_i| <= M_G and ||grad_r G_i|| <= reference_lipschitz on `states` sampled states.
PropertyResult check_bound_constants(const MarketParams& params, int states, std::mt19937_64& rng);

/// signed_drift > 0 on a grid x grid lattice over the box, skipping a ball of `exclusion`
/// around the SNE.
PropertyResult check_g_positivity(const MarketParams& params, const PricePair& sne, int grid,
                                  double exclusion);

/// Shell minima of signed_drift at eps = 0.25, 0.5 and 1 times the largest shell that
/// fits in the box strictly increase with eps.
PropertyResult check_shell_monotonicity(const MarketParams& params, const PricePair& sne);

/// Hessian symmetric, det > 0, trace > 0 and the closed form matches a
/// finite-difference Hessian of drift_potential to 1e-5 relative.
PropertyResult check_hessian(const MarketParams& params, const PricePair& sne);

/// Finite-difference Hessian of drift_potential at `at` with step h.
std::array<std::array<double, 2>, 2> fd_hessian_H(const MarketParams& params, const PricePair& sne,
                                                  const PricePair& at, double h);

}  // namespace refgame::cli
