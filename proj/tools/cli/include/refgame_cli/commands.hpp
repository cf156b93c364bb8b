#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "refgame_cli/config.hpp"

namespace refgame::cli {

/// Summary lines are printed as `key = value`.
class Summary {
public:
    explicit Summary(std::ostream& out) : out_(out) {}

    void put(const std::string& key, const std::string& value);
    void put(const std::string& key, double value);
    void put(const std::string& key, std::int64_t value);
    void put(const std::string& key, bool value);

private:
    std::ostream& out_;
};

/// Each command returns an ExitCode. Validation/solver errors are reported on `err`.
int cmd_simulate(const ExperimentConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_sne(const ExperimentConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_compare(const ExperimentConfig& cfg, std::ostream& out, std::ostream& err);

struct VerifyOptions {
    /// Instance used by the fixed-grid checks.
    MarketParams params = figure1_params();
    std::int64_t random_instances = 0;
    std::uint64_t seed = 0;
};

int cmd_verify(const VerifyOptions& opts, std::ostream& out, std::ostream& err);

/// Path of the joined comparison file written next to `output_path`.
std::string compare_path(const std::string& output_path);

/// Entry point used by the executable; argv as given to main().
int run(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace refgame::cli
