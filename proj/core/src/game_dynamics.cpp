#include "refgame/game_dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "refgame/mnl_model.hpp"

namespace refgame {
namespace {

void require_positive(double x, const char* what) {
    if (!(x > 0.0) || !std::isfinite(x)) {
        throw DomainError(std::string(what) + " must be positive and finite");
    }
}

bool in_box(const PricePair& x, const MarketParams& params) {
    return x.h >= params.p_lo && x.h <= params.p_hi && x.l >= params.p_lo && x.l <= params.p_hi;
}

void check_run_inputs(const MarketParams& params, const MarketState& init,
                      const StepSchedule& schedule, std::int64_t horizon) {
    params.validate();
    if (horizon < 1) {
        throw DomainError("horizon must be at least 1");
    }
    if (!in_box(init.prices, params) || !in_box(init.references, params)) {
        throw DomainError("initial state must lie inside the price box");
    }
    if (static_cast<std::size_t>(horizon) > schedule.length()) {
        throw DomainError("explicit step schedule is shorter than the horizon");
    }
}

}  // namespace

double project(double x, double lo, double hi) { return std::min(std::max(x, lo), hi); }

PricePair reference_update(double alpha, const PricePair& r, const PricePair& p) {
    if (!(alpha >= 0.0 && alpha <= 1.0)) {
        throw DomainError("alpha must lie in [0, 1]");
    }
    auto smooth = [alpha](double ref, double price) {
        const double x = alpha * ref + (1.0 - alpha) * price;
        return project(x, std::min(ref, price), std::max(ref, price));
    };
    return {smooth(r.h, p.h), smooth(r.l, p.l)};
}

StepSchedule StepSchedule::constant(double eta) {
    require_positive(eta, "constant step size");
    return StepSchedule(Constant{eta});
}

StepSchedule StepSchedule::inverse_sqrt(double scale) {
    require_positive(scale, "step scale");
    return StepSchedule(InverseSqrt{scale});
}

StepSchedule StepSchedule::inverse_t(double scale) {
    require_positive(scale, "step scale");
    return StepSchedule(InverseT{scale});
}

StepSchedule StepSchedule::explicit_sequence(std::vector<double> etas) {
    if (etas.empty()) {
        throw DomainError("explicit step schedule must not be empty");
    }
    for (std::size_t t = 0; t < etas.size(); ++t) {
        require_positive(etas[t], "explicit step size");
        if (t > 0 && etas[t] > etas[t - 1]) {
            throw DomainError("explicit step schedule must be non-increasing (violated at t=" +
                              std::to_string(t) + ")");
        }
    }
    return StepSchedule(Explicit{std::move(etas)});
}

double StepSchedule::operator()(std::int64_t t) const {
    if (t < 0) {
        throw DomainError("period index must be non-negative");
    }
    const double n = static_cast<double>(t) + 1.0;
    struct Visitor {
        std::int64_t t;
        double n;
        double operator()(const Constant& k) const { return k.eta; }
        double operator()(const InverseSqrt& k) const { return k.scale / std::sqrt(n); }
        double operator()(const InverseT& k) const { return k.scale / n; }
        double operator()(const Explicit& k) const {
            if (static_cast<std::size_t>(t) >= k.etas.size()) {
                throw DomainError("period beyond explicit step schedule");
            }
            return k.etas[static_cast<std::size_t>(t)];
        }
    };
    return std::visit(Visitor{t, n}, rule_);
}

std::size_t StepSchedule::length() const noexcept {
    if (const auto* e = std::get_if<Explicit>(&rule_)) {
        return e->etas.size();
    }
    return std::numeric_limits<std::size_t>::max();
}

std::string StepSchedule::describe() const {
    std::ostringstream os;
    os.precision(17);
    struct Visitor {
        std::ostringstream& os;
        void operator()(const Constant& k) const { os << "constant(" << k.eta << ")"; }
        void operator()(const InverseSqrt& k) const { os << "inverse_sqrt(" << k.scale << ")"; }
        void operator()(const InverseT& k) const { os << "inverse_t(" << k.scale << ")"; }
        void operator()(const Explicit& k) const { os << "explicit(" << k.etas.size() << ")"; }
    };
    std::visit(Visitor{os}, rule_);
    return os.str();
}

namespace detail {

MarketState advance(const MarketParams& params, const MarketState& state, double eta) {
    const PricePair grad = log_rev_derivative(params, state.prices, state.references);
    MarketState next;
    next.prices.h = project(state.prices.h + eta * grad.h, params.p_lo, params.p_hi);
    next.prices.l = project(state.prices.l + eta * grad.l, params.p_lo, params.p_hi);
    next.references = reference_update(params.alpha, state.references, state.prices);
    next.references.h = project(next.references.h, params.p_lo, params.p_hi);
    next.references.l = project(next.references.l, params.p_lo, params.p_hi);
    return next;
}

}  // namespace detail

MarketState opga_step(const MarketParams& params, const MarketState& state, double eta) {
    require_positive(eta, "step size");
    return detail::advance(params, state, eta);
}

void simulate(const MarketParams& params, const MarketState& init, const StepSchedule& schedule,
              std::int64_t horizon, const RecordSink& sink) {
    check_run_inputs(params, init, schedule, horizon);
    MarketState state = init;
    for (std::int64_t t = 0;; ++t) {
        TrajectoryRecord rec;
        rec.t = t;
        rec.prices = state.prices;
        rec.references = state.references;
        rec.derivatives = log_rev_derivative(params, state.prices, state.references);
        rec.eta = static_cast<std::size_t>(t) < schedule.length()
                      ? schedule(t)
                      : std::numeric_limits<double>::quiet_NaN();
        sink(rec);
        if (t == horizon) {
            break;
        }
        state = opga_step(params, state, rec.eta);
    }
}

Trajectory simulate(const MarketParams& params, const MarketState& init,
                    const StepSchedule& schedule, std::int64_t horizon) {
    if (horizon >= kMaxRetainedRecords) {
        throw DomainError("horizon too long for in-memory retention; use the streaming overload");
    }
    Trajectory traj;
    traj.params = params;
    traj.schedule = schedule.describe();
    traj.records.reserve(static_cast<std::size_t>(std::max<std::int64_t>(horizon, 0)) + 1);
    simulate(params, init, schedule, horizon,
             [&traj](const TrajectoryRecord& rec) { traj.records.push_back(rec); });
    return traj;
}

}  // namespace refgame
