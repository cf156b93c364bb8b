#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

#include "refgame/game_dynamics.hpp"
#include "refgame/types.hpp"

namespace refgame::cli {

/// Process exit codes.
enum ExitCode : int {
    kOk = 0,
    kValidationError = 1,
    kSolverFailure = 2,
    kPropertyFailure = 3,
};

/// Configuration problem; `where` names the field or the line:column.
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string where, const std::string& message)
        : std::runtime_error(where + ": " + message), where_(std::move(where)) {}

    const std::string& where() const noexcept { return where_; }

private:
    std::string where_;
};

struct ScheduleSpec {
    enum class Kind { Constant, InverseSqrt, InverseT, Explicit };
    Kind kind = Kind::InverseSqrt;
    /// eta for Constant, the scale for InverseSqrt / InverseT.
    double value = 1.0;
    /// InverseT only: take the scale as 2 / gamma_estimate at the solved SNE.
    bool auto_scale = false;
    std::vector<double> etas;
};

struct ExperimentConfig {
    MarketParams params;
    MarketState init;
    ScheduleSpec schedule;
    std::int64_t horizon = 1;
    std::string output_path = "trajectory.csv";
    std::uint64_t seed = 0;
};

/// Parses the JSON document. Throws ConfigError with a field path or line:column.
ExperimentConfig parse_config(const std::string& text);

ExperimentConfig load_config(const std::string& path);

/// Field-level checks (horizon, parameter signs, box, initial state inside box).
void validate_config(const ExperimentConfig& cfg);

/// Builds the schedule; `gamma_estimate` is used only by auto-scaled inverse_t rules.
StepSchedule make_schedule(const ScheduleSpec& spec, std::optional<double> gamma_estimate = {});

enum class Figure1Variant { A, B, C };

/// a: inverse_sqrt(1), horizon 1e5. b: constant(1), horizon 1e4. c: inverse_sqrt(1),
/// horizon 1e3 (OPGA against the equilibrium policy).
ExperimentConfig figure1_config(Figure1Variant variant);

std::string to_json(const ExperimentConfig& cfg);

}  // namespace refgame::cli
