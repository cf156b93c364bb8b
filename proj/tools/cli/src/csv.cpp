#include "refgame_cli/csv.hpp"

#include <charconv>
#include <stdexcept>
#include <system_error>

#include "refgame/analysis.hpp"

namespace refgame::cli {

std::string format_double(double x) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), x, std::chars_format::general, 17);
    if (res.ec != std::errc{}) {
        throw std::runtime_error("number formatting failed");
    }
    return std::string(buf, res.ptr);
}

TrajectoryCsvWriter::TrajectoryCsvWriter(std::ostream& out, const MarketParams& params,
                                         const PricePair& sne)
    : out_(out), params_(params), sne_(sne) {
    out_ << kTrajectoryHeader << '\n';
}

void TrajectoryCsvWriter::write(const TrajectoryRecord& rec) {
    const double dh = rec.prices.h - sne_.h;
    const double dl = rec.prices.l - sne_.l;
    out_ << rec.t << ',' << format_double(rec.prices.h) << ',' << format_double(rec.prices.l) << ','
         << format_double(rec.references.h) << ',' << format_double(rec.references.l) << ','
         << format_double(rec.derivatives.h) << ',' << format_double(rec.derivatives.l) << ','
         << format_double(dh * dh + dl * dl) << ','
         << format_double(epsilon_l1(params_, rec.prices, sne_)) << '\n';
}

std::ofstream open_output(const std::string& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw std::runtime_error("cannot open output file " + path);
    }
    return out;
}

}  // namespace refgame::cli
