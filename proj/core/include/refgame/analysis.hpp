#pragma once

#include <array>
#include <cstdint>

#include "refgame/game_dynamics.hpp"
#include "refgame/types.hpp"

namespace refgame {

/// Weighted l1 distance sum_i |p_i** - p_i| / (b_i + c_i).
double epsilon_l1(const MarketParams& params, const PricePair& p, const PricePair& sne);

/// Regions of the box around the SNE. Boundaries follow the half-open conventions
///   N1: p_H >  p_H**, p_L >= p_L**     N2: p_H <= p_H**, p_L >  p_L**
///   N3: p_H <  p_H**, p_L <= p_L**     N4: p_H >= p_H**, p_L <  p_L**
enum class Quadrant { N1, N2, N3, N4, Origin };

const char* to_string(Quadrant q) noexcept;

Quadrant quadrant(const PricePair& p, const PricePair& sne);

/// sign(p_H** - p_H) G_H(p, p) + sign(p_L** - p_L) G_L(p, p); positive off the SNE.
double signed_drift(const MarketParams& params, const PricePair& p, const PricePair& sne);

/// sum_i (b_i + c_i) G_i(p, p) (p_i** - p_i); locally quadratic around the SNE.
double drift_potential(const MarketParams& params, const PricePair& p, const PricePair& sne);

struct HessianCertificate {
    std::array<std::array<double, 2>, 2> matrix{};
    double det = 0.0;
    double trace = 0.0;
    double min_eigenvalue = 0.0;
    /// Half the smallest eigenvalue, so that the Hessian dominates 2*gamma*I.
    double gamma_estimate = 0.0;
};

/// Closed-form Hessian of drift_potential at the SNE.
HessianCertificate hessian_certificate(const MarketParams& params, const PricePair& sne);

/// Largest radius rho (found by halving from 0.1 * (p_hi - p_lo)) such that
/// drift_potential(p) >= (min_eig / 4) ||p - p**||^2 on `samples` directions at radii
/// rho, rho/2, rho/4 and rho/8. Returns 0 if no radius above 1e-8 passes.
double quadratic_growth_radius(const MarketParams& params, const PricePair& sne,
                               const HessianCertificate& cert, int samples = 360);

/// Minimum of signed_drift over the in-box part of the level set epsilon_l1(p) = eps,
/// sampled at `samples` points. Returns +inf if no sample lies in the box.
double shell_minimum(const MarketParams& params, const PricePair& sne, double eps,
                     int samples = 4000);

struct RateConstants {
    /// (1 + alpha^2) / 2, the per-period contraction of the price/reference gap.
    double contraction = 0.0;
    /// Coefficient of the O(1/t^2) gap bound.
    double gap_coefficient = 0.0;
    /// Period after which the gap bound holds.
    double gap_onset = 0.0;
    /// gradient_bound^2 * sum_i (b_i + c_i)^2.
    double step_error_coefficient = 0.0;
    /// 2 * reference_lipschitz * (p_hi - p_lo) * sum_i (b_i + c_i).
    double reference_drift_coefficient = 0.0;
    double gamma_estimate = 0.0;
    /// 2 / gamma_estimate.
    double step_scale = 0.0;
};

/// Constants of the O(1/t) rate argument for the schedule eta^t = step_scale / (t + 1).
/// Throws DomainError if alpha == 1 or gamma_estimate <= 0.
RateConstants rate_constants(const MarketParams& params, double gamma_estimate);

struct RateReport {
    double sup_t_dist2 = 0.0;
    double sup_t2_gap2 = 0.0;
    std::int64_t t_start = 0;
    std::int64_t t_end = 0;
    bool converged = false;
};

/// Sups of t ||p** - p^t||^2 and t^2 ||r^t - p^t||^2 over records with
/// t_start <= t <= t_end. `converged` compares the terminal ||p** - p^T||_inf
/// (last record of the trajectory) with `threshold`.
RateReport rate_window(const Trajectory& traj, const PricePair& sne, std::int64_t t_start,
                       std::int64_t t_end, double threshold = 1e-3);

/// rate_window over the trailing `window_fraction` of the trajectory.
RateReport rate_fit(const Trajectory& traj, const PricePair& sne, double window_fraction,
                    double threshold = 1e-3);

enum class CycleVerdict { Converged, Cycling, Undecided };

const char* to_string(CycleVerdict v) noexcept;

/// Thresholds used by cycle_detector on tail distances ||p^t - p**||_2.
inline constexpr double kConvergedDistance = 1e-3;
inline constexpr double kCyclingMinDistance = 1e-2;

/// Converged if every tail distance is below 1e-3. Cycling if the tail distance
/// stays above 1e-2, keeps reversing direction, and the peak amplitudes of the two
/// tail halves are within a factor of two. Undecided otherwise.
CycleVerdict cycle_detector(const Trajectory& traj, const PricePair& sne, double tail_fraction);

}  // namespace refgame
