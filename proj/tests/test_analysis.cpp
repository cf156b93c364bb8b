#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "refgame/analysis.hpp"
#include "refgame/equilibrium.hpp"
#include "refgame/mnl_model.hpp"
#include "refgame_cli/verify.hpp"

using namespace refgame;

namespace {

const MarketParams kFig = figure1_params();
const PricePair kSne{oracle::kSneH, oracle::kSneL};

Trajectory synthetic(const std::vector<PricePair>& prices) {
    Trajectory traj;
    traj.params = kFig;
    for (std::size_t k = 0; k < prices.size(); ++k) {
        TrajectoryRecord rec;
        rec.t = static_cast<std::int64_t>(k);
        rec.prices = prices[k];
        rec.references = prices[k];
        traj.records.push_back(rec);
    }
    return traj;
}

}  // namespace

TEST(EpsilonL1, Examples) {
    EXPECT_EQ(epsilon_l1(kFig, kSne, kSne), 0.0);
    EXPECT_DOUBLE_EQ(epsilon_l1(kFig, {kSne.h + 2.82, kSne.l}, kSne), 1.0);
    const PricePair p0 = figure1_initial_state().prices;
    const double by_hand = std::abs(p0.h - kSne.h) / 2.82 + std::abs(p0.l - kSne.l) / 1.52;
    EXPECT_NEAR(epsilon_l1(kFig, p0, kSne), by_hand, 1e-15);
    EXPECT_NEAR(epsilon_l1(kFig, p0, kSne), oracle::kEpsilonL1, 1e-14);
}

TEST(Quadrant, BoundaryConventions) {
    const PricePair o{1.0, 1.0};
    EXPECT_EQ(quadrant({1.0, 1.0}, o), Quadrant::Origin);
    EXPECT_EQ(quadrant({2.0, 1.0}, o), Quadrant::N1);
    EXPECT_EQ(quadrant({2.0, 2.0}, o), Quadrant::N1);
    EXPECT_EQ(quadrant({1.0, 2.0}, o), Quadrant::N2);
    EXPECT_EQ(quadrant({0.5, 2.0}, o), Quadrant::N2);
    EXPECT_EQ(quadrant({0.5, 1.0}, o), Quadrant::N3);
    EXPECT_EQ(quadrant({0.5, 0.5}, o), Quadrant::N3);
    EXPECT_EQ(quadrant({1.0, 0.5}, o), Quadrant::N4);
    EXPECT_EQ(quadrant({2.0, 0.5}, o), Quadrant::N4);
    EXPECT_STREQ(to_string(Quadrant::N3), "N3");
    EXPECT_STREQ(to_string(Quadrant::Origin), "ORIGIN");
}

TEST(Quadrant, TotalityAgainstDefinitions) {
    std::mt19937_64 rng(41);
    std::uniform_int_distribution<int> pick(0, 2);
    const double vals[] = {0.5, 1.0, 1.5};
    for (int k = 0; k < 200; ++k) {
        const PricePair p{vals[pick(rng)], vals[pick(rng)]};
        const bool n1 = p.h > 1.0 && p.l >= 1.0;
        const bool n2 = p.h <= 1.0 && p.l > 1.0;
        const bool n3 = p.h < 1.0 && p.l <= 1.0;
        const bool n4 = p.h >= 1.0 && p.l < 1.0;
        const bool origin = p.h == 1.0 && p.l == 1.0;
        ASSERT_EQ(n1 + n2 + n3 + n4 + origin, 1);
        const Quadrant q = quadrant(p, {1.0, 1.0});
        EXPECT_EQ(q == Quadrant::N1, n1);
        EXPECT_EQ(q == Quadrant::N2, n2);
        EXPECT_EQ(q == Quadrant::N3, n3);
        EXPECT_EQ(q == Quadrant::N4, n4);
        EXPECT_EQ(q == Quadrant::Origin, origin);
    }
}

TEST(ScriptG, ZeroAtSneAndPositiveOnGrid) {
    EXPECT_NEAR(signed_drift(kFig, kSne, kSne), 0.0, 1e-14);
    const cli::PropertyResult r = cli::check_g_positivity(kFig, kSne, 100, 1e-3);
    EXPECT_TRUE(r.ok()) << r.passed << "/" << r.total;
    EXPECT_GT(r.total, 9900);
}

TEST(ScriptG, IncreasesAlongWeightedRay) {
    double prev = 0.0;
    for (double s = 0.01; kSne.h + s * 2.82 <= kFig.p_hi; s += 0.01) {
        const double g = signed_drift(kFig, {kSne.h + s * 2.82, kSne.l}, kSne);
        EXPECT_GT(g, prev);
        prev = g;
    }
}

TEST(ScriptG, ShellMinimaIncrease) {
    const cli::PropertyResult r = cli::check_shell_monotonicity(kFig, kSne);
    EXPECT_EQ(r.total, 3);
    EXPECT_TRUE(r.ok());
}

TEST(ScriptH, ZeroAtSnePositiveOnSmallSphere) {
    EXPECT_NEAR(drift_potential(kFig, kSne, kSne), 0.0, 1e-14);
    for (int k = 0; k < 720; ++k) {
        const double th = 2.0 * std::numbers::pi * k / 720.0;
        const PricePair p{kSne.h + 1e-2 * std::cos(th), kSne.l + 1e-2 * std::sin(th)};
        EXPECT_GT(drift_potential(kFig, p, kSne), 0.0);
    }
}

TEST(ScriptH, QuadraticGrowthOnSmallBall) {
    const HessianCertificate cert = hessian_certificate(kFig, kSne);
    const double rho = quadratic_growth_radius(kFig, kSne, cert);
    ASSERT_GT(rho, 0.0);
    std::mt19937_64 rng(43);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int k = 0; k < 2000; ++k) {
        const PricePair d{u(rng), u(rng)};
        const double n = std::hypot(d.h, d.l);
        if (n > 1.0 || n == 0.0) {
            continue;
        }
        const PricePair p{kSne.h + rho * d.h, kSne.l + rho * d.l};
        const double r2 = rho * rho * n * n;
        EXPECT_GE(drift_potential(kFig, p, kSne), 0.25 * cert.min_eigenvalue * r2);
    }
}

TEST(HessianCertificate, Figure1Oracle) {
    const HessianCertificate c = hessian_certificate(kFig, kSne);
    EXPECT_NEAR(c.matrix[0][0], oracle::kHess11, 1e-11);
    EXPECT_NEAR(c.matrix[0][1], oracle::kHess12, 1e-11);
    EXPECT_NEAR(c.matrix[1][1], oracle::kHess22, 1e-11);
    EXPECT_EQ(c.matrix[0][1], c.matrix[1][0]);
    EXPECT_NEAR(c.det, oracle::kHessDet, 1e-10);
    EXPECT_NEAR(c.trace, oracle::kHessTrace, 1e-10);
    EXPECT_NEAR(c.min_eigenvalue, oracle::kHessMinEig, 1e-10);
    EXPECT_NEAR(c.gamma_estimate, oracle::kGamma, 1e-10);
}

TEST(HessianCertificate, MatchesFiniteDifferences) {
    EXPECT_TRUE(cli::check_hessian(kFig, kSne).ok());
    std::mt19937_64 rng(47);
    for (int k = 0; k < 200; ++k) {
        const MarketParams m = cli::random_instance(rng);
        const SneSolution sol = solve_sne(m);
        const cli::PropertyResult r = cli::check_hessian(m, sol.prices);
        EXPECT_TRUE(r.ok()) << "instance " << k << " worst " << r.worst;
    }
}

TEST(RateConstants, Examples) {
    const BoundConstants k = bound_constants(kFig);
    const double sum_sq = 2.82 * 2.82 + 1.52 * 1.52;

    const RateConstants c = rate_constants(kFig, oracle::kGamma);
    EXPECT_DOUBLE_EQ(c.contraction, 0.905);
    EXPECT_LT(c.contraction, 1.0);
    EXPECT_NEAR(c.step_error_coefficient, k.gradient_bound * k.gradient_bound * sum_sq, 1e-9);
    EXPECT_NEAR(c.gap_coefficient, (1.81 / 0.19) * c.step_error_coefficient, 1e-7);
    const double tl = std::sqrt(1.905) / (std::sqrt(1.905) - std::sqrt(1.81));
    EXPECT_NEAR(c.gap_onset, tl, 1e-9);
    EXPECT_NEAR(c.reference_drift_coefficient, 2.0 * k.reference_lipschitz * 7.4 * 4.34, 1e-12);
    EXPECT_NEAR(c.step_scale, oracle::kDEta, 1e-12);
    for (double x : {c.contraction, c.gap_coefficient, c.gap_onset, c.step_error_coefficient, c.reference_drift_coefficient, c.step_scale}) {
        EXPECT_TRUE(std::isfinite(x) && x > 0.0);
    }

    MarketParams m0 = kFig;
    m0.alpha = 0.0;
    const RateConstants z = rate_constants(m0, 1.0);
    EXPECT_DOUBLE_EQ(z.contraction, 0.5);
    EXPECT_NEAR(z.gap_coefficient, z.step_error_coefficient, 1e-12);
}

TEST(RateConstants, Errors) {
    MarketParams m = kFig;
    m.alpha = 1.0;
    EXPECT_THROW(rate_constants(m, 1.0), DomainError);
    EXPECT_THROW(rate_constants(kFig, 0.0), DomainError);
    EXPECT_THROW(rate_constants(kFig, -1.0), DomainError);
}

TEST(RateFit, ConstantTrajectoryAtSne) {
    const Trajectory traj = synthetic(std::vector<PricePair>(100, kSne));
    const RateReport r = rate_fit(traj, kSne, 0.5);
    EXPECT_EQ(r.sup_t_dist2, 0.0);
    EXPECT_EQ(r.sup_t2_gap2, 0.0);
    EXPECT_TRUE(r.converged);
    EXPECT_EQ(r.t_end, 99);
    EXPECT_EQ(r.t_start, 49);
}

TEST(RateFit, WindowArithmetic) {
    std::vector<PricePair> prices;
    for (int t = 0; t <= 10; ++t) {
        prices.push_back({kSne.h + 1.0 / std::sqrt(t + 1.0), kSne.l});
    }
    const RateReport r = rate_window(synthetic(prices), kSne, 2, 5);
    EXPECT_NEAR(r.sup_t_dist2, 5.0 / 6.0, 1e-12);
    EXPECT_FALSE(r.converged);
    EXPECT_THROW(rate_fit(synthetic(prices), kSne, 0.0), DomainError);
    EXPECT_THROW(rate_fit(synthetic(prices), kSne, 1.5), DomainError);
    EXPECT_THROW(rate_fit(Trajectory{}, kSne, 0.5), DomainError);
}

TEST(RateFit, ConstantStepsDoNotConverge) {
    const Trajectory traj =
        simulate(kFig, figure1_initial_state(), StepSchedule::constant(1.0), 10'000);
    EXPECT_FALSE(rate_fit(traj, kSne, 0.5).converged);
}

TEST(CycleDetector, SyntheticCases) {
    EXPECT_EQ(cycle_detector(synthetic(std::vector<PricePair>(50, kSne)), kSne, 0.2),
              CycleVerdict::Converged);

    std::vector<PricePair> two_cycle;
    for (int t = 0; t < 200; ++t) {
        two_cycle.push_back(t % 2 ? PricePair{kSne.h + 0.3, kSne.l} : PricePair{kSne.h - 0.1, kSne.l});
    }
    EXPECT_EQ(cycle_detector(synthetic(two_cycle), kSne, 0.5), CycleVerdict::Cycling);

    std::vector<PricePair> decaying;
    for (int t = 0; t < 200; ++t) {
        decaying.push_back({kSne.h + std::exp(-0.05 * t), kSne.l});
    }
    EXPECT_EQ(cycle_detector(synthetic(decaying), kSne, 0.5), CycleVerdict::Undecided);

    EXPECT_THROW(cycle_detector(synthetic(two_cycle), kSne, 1.0), DomainError);
    EXPECT_THROW(cycle_detector(synthetic(two_cycle), kSne, 0.0), DomainError);
    EXPECT_STREQ(to_string(CycleVerdict::Cycling), "CYCLING");
}

TEST(CycleDetector, Figure1Schedules) {
    const MarketState init = figure1_initial_state();
    const Trajectory cyc = simulate(kFig, init, StepSchedule::constant(1.0), 10'000);
    EXPECT_EQ(cycle_detector(cyc, kSne, 0.1), CycleVerdict::Cycling);
    const Trajectory conv = simulate(kFig, init, StepSchedule::inverse_sqrt(1.0), 100'000);
    EXPECT_EQ(cycle_detector(conv, kSne, 0.1), CycleVerdict::Converged);
}
