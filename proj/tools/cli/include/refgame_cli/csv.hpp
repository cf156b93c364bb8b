#pragma once

#include <fstream>
#include <ostream>
#include <string>

#include "refgame/game_dynamics.hpp"
#include "refgame/types.hpp"

namespace refgame::cli {

inline constexpr const char* kTrajectoryHeader = "t,p_H,p_L,r_H,r_L,D_H,D_L,dist2_sne,eps_l1";

/// 17 significant digits, locale independent.
std::string format_double(double x);

/// Writes trajectory rows as they arrive; LF line endings.
class TrajectoryCsvWriter {
public:
    TrajectoryCsvWriter(std::ostream& out, const MarketParams& params, const PricePair& sne);

    void write(const TrajectoryRecord& rec);

private:
    std::ostream& out_;
    MarketParams params_;
    PricePair sne_;
};

/// Opens `path` for binary writing; throws std::runtime_error on failure.
std::ofstream open_output(const std::string& path);

}  // namespace refgame::cli
