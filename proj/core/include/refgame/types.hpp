#pragma once

#include <array>
#include <stdexcept>
#include <string>

namespace refgame {

/// Thrown when an argument lies outside the domain of a model function.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Thrown when an iterative solver exhausts its budget.
class SolverFailure : public std::runtime_error {
public:
    SolverFailure(const std::string& what, double bracket_lo, double bracket_hi)
        : std::runtime_error(what), bracket_lo_(bracket_lo), bracket_hi_(bracket_hi) {}

    explicit SolverFailure(const std::string& what)
        : SolverFailure(what, 0.0, 0.0) {}

    /// Last bracket held by the solver (both zero when not applicable).
    double bracket_lo() const noexcept { return bracket_lo_; }
    double bracket_hi() const noexcept { return bracket_hi_; }

private:
    double bracket_lo_;
    double bracket_hi_;
};

enum class Firm { H = 0, L = 1 };

constexpr Firm rival(Firm i) noexcept { return i == Firm::H ? Firm::L : Firm::H; }

constexpr const char* to_string(Firm i) noexcept { return i == Firm::H ? "H" : "L"; }

constexpr std::array<Firm, 2> kFirms{Firm::H, Firm::L};

/// Utility coefficients of one product: intrinsic value, price sensitivity
/// and reference-price sensitivity.
struct FirmParams {
    double a = 0.0;
    double b = 1.0;
    double c = 1.0;

    /// b + c; appears as the scale of every first-order condition.
    constexpr double sensitivity() const noexcept { return b + c; }
};

/// Full game instance: both firms, reference memory and the feasible price box.
struct MarketParams {
    FirmParams firm_h;
    FirmParams firm_l;
    double alpha = 0.0;
    double p_lo = 0.0;
    double p_hi = 0.0;

    constexpr const FirmParams& firm(Firm i) const noexcept {
        return i == Firm::H ? firm_h : firm_l;
    }
    constexpr FirmParams& firm(Firm i) noexcept { return i == Firm::H ? firm_h : firm_l; }

    /// Throws DomainError unless b, c > 0, a finite, 0 <= alpha <= 1 and 0 < p_lo < p_hi.
    /// Box admissibility against the equilibrium bounds is checked separately by
    /// validate_price_box().
    void validate() const;
};

/// A pair of per-firm quantities (prices, references, derivatives).
struct PricePair {
    double h = 0.0;
    double l = 0.0;

    constexpr double operator[](Firm i) const noexcept { return i == Firm::H ? h : l; }
    constexpr double& operator[](Firm i) noexcept { return i == Firm::H ? h : l; }

    friend constexpr bool operator==(const PricePair&, const PricePair&) = default;
};

struct MarketState {
    PricePair prices;
    PricePair references;

    friend constexpr bool operator==(const MarketState&, const MarketState&) = default;
};

/// The figure1 preset market: (a,b,c)_H = (8.70, 2.00, 0.82), (a,b,c)_L = (4.30, 1.20, 0.32),
/// alpha = 0.90. The box [0.1, 7.5] contains both the initial state and the SNE bounds.
MarketParams figure1_params();

/// Initial state of the figure1 preset runs: p0 = (4.85, 4.86), r0 = (0.10, 2.95).
MarketState figure1_initial_state();

}  // namespace refgame
