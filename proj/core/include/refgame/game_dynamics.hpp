#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <variant>
#include <vector>

#include "refgame/types.hpp"

namespace refgame {

/// Clamp x into [lo, hi].
double project(double x, double lo, double hi);

/// Exponential smoothing alpha*r + (1 - alpha)*p, componentwise.
/// The result is clamped into the hull of its two inputs, so it stays in any box
/// that contains both.
PricePair reference_update(double alpha, const PricePair& r, const PricePair& p);

/// Step-size rule eta^t, t = 0, 1, 2, ...
class StepSchedule {
public:
    struct Constant {
        double eta;
    };
    struct InverseSqrt {
        double scale;
    };
    struct InverseT {
        double scale;
    };
    struct Explicit {
        std::vector<double> etas;
    };
    using Rule = std::variant<Constant, InverseSqrt, InverseT, Explicit>;

    static StepSchedule constant(double eta);
    /// eta^t = scale / sqrt(t + 1)
    static StepSchedule inverse_sqrt(double scale);
    /// eta^t = scale / (t + 1)
    static StepSchedule inverse_t(double scale);
    /// Positive, non-increasing explicit sequence.
    static StepSchedule explicit_sequence(std::vector<double> etas);

    double operator()(std::int64_t t) const;

    /// Number of periods the rule defines; SIZE_MAX for closed-form rules.
    std::size_t length() const noexcept;

    const Rule& rule() const noexcept { return rule_; }

    /// Short text such as "inverse_sqrt(1)".
    std::string describe() const;

private:
    explicit StepSchedule(Rule rule) : rule_(std::move(rule)) {}
    Rule rule_;
};

struct TrajectoryRecord {
    std::int64_t t = 0;
    PricePair prices;
    PricePair references;
    PricePair derivatives;
    /// Step size consumed at period t. For the terminal record of an explicit
    /// schedule that ends at the horizon this is NaN.
    double eta = 0.0;
};

struct Trajectory {
    MarketParams params;
    std::string schedule;
    std::vector<TrajectoryRecord> records;
};

using RecordSink = std::function<void(const TrajectoryRecord&)>;

/// Largest number of records simulate() will keep in memory.
inline constexpr std::int64_t kMaxRetainedRecords = 10'000'000;

/// One period of online projected gradient ascent. Both the price step and the
/// reference update read the pre-step state. Requires eta > 0.
MarketState opga_step(const MarketParams& params, const MarketState& state, double eta);

/// Runs `horizon` periods from `init` and returns records t = 0..horizon.
Trajectory simulate(const MarketParams& params, const MarketState& init,
                    const StepSchedule& schedule, std::int64_t horizon);

/// Streaming form: `sink` is called once per period, in order, with nothing retained.
void simulate(const MarketParams& params, const MarketState& init, const StepSchedule& schedule,
              std::int64_t horizon, const RecordSink& sink);

namespace detail {
/// opga_step without the eta > 0 precondition.
MarketState advance(const MarketParams& params, const MarketState& state, double eta);
}  // namespace detail

}  // namespace refgame
