#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "refgame_cli/commands.hpp"
#include "refgame_cli/config.hpp"
#include "refgame_cli/csv.hpp"

using namespace refgame;
using namespace refgame::cli;

namespace {

const char* kValidConfig = R"({
  "params": {
    "firm_H": {"a": 8.70, "b": 2.00, "c": 0.82},
    "firm_L": {"a": 4.30, "b": 1.20, "c": 0.32},
    "alpha": 0.9, "p_lo": 0.1, "p_hi": 7.5
  },
  "init_prices": {"H": 4.85, "L": 4.86},
  "init_references": [0.10, 2.95],
  "schedule": {"kind": "inverse_t", "scale": "auto"},
  "horizon": 200,
  "output_path": "cli_test.csv",
  "seed": 3
})";

struct RunResult {
    int code;
    std::string out;
    std::string err;
};

RunResult run_cli(std::vector<std::string> args) {
    args.insert(args.begin(), "refgame");
    std::vector<char*> argv;
    for (std::string& a : args) {
        argv.push_back(a.data());
    }
    std::ostringstream out;
    std::ostringstream err;
    const int code = run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

std::string write_temp(const std::string& name, const std::string& text) {
    std::ofstream(name, std::ios::binary) << text;
    return name;
}

std::string summary_value(const std::string& out, const std::string& key) {
    std::istringstream in(out);
    std::string line;
    const std::string prefix = key + " = ";
    while (std::getline(in, line)) {
        if (line.rfind(prefix, 0) == 0) {
            return line.substr(prefix.size());
        }
    }
    return {};
}

std::string replace(std::string text, const std::string& from, const std::string& to) {
    const auto at = text.find(from);
    EXPECT_NE(at, std::string::npos) << from;
    return text.replace(at, from.size(), to);
}

}  // namespace

TEST(Config, ParsesAllFields) {
    const ExperimentConfig cfg = parse_config(kValidConfig);
    EXPECT_EQ(cfg.params.firm_h.a, 8.70);
    EXPECT_EQ(cfg.params.firm_l.c, 0.32);
    EXPECT_EQ(cfg.params.alpha, 0.9);
    EXPECT_EQ(cfg.init.prices, (PricePair{4.85, 4.86}));
    EXPECT_EQ(cfg.init.references, (PricePair{0.10, 2.95}));
    EXPECT_EQ(cfg.schedule.kind, ScheduleSpec::Kind::InverseT);
    EXPECT_TRUE(cfg.schedule.auto_scale);
    EXPECT_EQ(cfg.horizon, 200);
    EXPECT_EQ(cfg.output_path, "cli_test.csv");
    EXPECT_EQ(cfg.seed, 3u);
    EXPECT_NO_THROW(validate_config(cfg));
}

TEST(Config, RoundTripsThroughJson) {
    const ExperimentConfig cfg = figure1_config(Figure1Variant::B);
    const ExperimentConfig back = parse_config(to_json(cfg));
    EXPECT_EQ(back.params.firm_h.b, cfg.params.firm_h.b);
    EXPECT_EQ(back.init.references, cfg.init.references);
    EXPECT_EQ(back.schedule.kind, cfg.schedule.kind);
    EXPECT_EQ(back.schedule.value, cfg.schedule.value);
    EXPECT_EQ(back.horizon, cfg.horizon);
}

TEST(Config, SyntaxErrorReportsLineAndColumn) {
    try {
        parse_config("{\n  \"params\": {\n    \"alpha\": ,\n  }\n}");
        FAIL() << "expected ConfigError";
    } catch (const ConfigError& e) {
        EXPECT_NE(e.where().find("line 3"), std::string::npos) << e.what();
    }
}

TEST(Config, FieldErrorsNameThePath) {
    auto where = [](const std::string& text) {
        try {
            validate_config(parse_config(text));
        } catch (const ConfigError& e) {
            return e.where();
        }
        return std::string("<none>");
    };
    EXPECT_EQ(where(replace(kValidConfig, "\"b\": 2.00, ", "")), "params.firm_H.b");
    EXPECT_EQ(where(replace(kValidConfig, "\"b\": 1.20", "\"b\": \"x\"")), "params.firm_L.b");
    EXPECT_EQ(where(replace(kValidConfig, "\"horizon\": 200", "\"horizon\": 0")), "horizon");
    EXPECT_EQ(where(replace(kValidConfig, "\"horizon\": 200", "\"horizon\": 2.5")), "horizon");
    EXPECT_EQ(where(replace(kValidConfig, "\"b\": 2.00", "\"b\": -2.00")), "params");
    EXPECT_EQ(where(replace(kValidConfig, "\"p_hi\": 7.5", "\"p_hi\": 3.0")), "params.p_lo/p_hi");
    EXPECT_EQ(where(replace(kValidConfig, "\"H\": 4.85", "\"H\": 9.0")), "init_prices");
    EXPECT_EQ(where(replace(kValidConfig, "[0.10, 2.95]", "[0.10]")), "init_references");
    EXPECT_EQ(where(replace(kValidConfig, "\"inverse_t\"", "\"cosine\"")), "schedule.kind");
    EXPECT_EQ(where(replace(kValidConfig, "{\"kind\": \"inverse_t\", \"scale\": \"auto\"}",
                            "{\"kind\": \"explicit\", \"etas\": [1.0, 0.5]}")),
              "schedule.etas");
    EXPECT_EQ(where(replace(kValidConfig, "{\"kind\": \"inverse_t\", \"scale\": \"auto\"}",
                            "{\"kind\": \"constant\", \"eta\": -1}")),
              "schedule");
}

TEST(Config, MissingFileIsConfigError) {
    EXPECT_THROW(load_config("does/not/exist.json"), ConfigError);
}

TEST(Config, ShippedConfigsValidate) {
    for (const char* name : {"figure1.json", "symmetric.json"}) {
        const ExperimentConfig cfg = load_config(std::string(REFGAME_CONFIG_DIR) + "/" + name);
        EXPECT_NO_THROW(validate_config(cfg)) << name;
    }
}

TEST(Schedule, AutoInverseTUsesGamma) {
    ScheduleSpec spec{ScheduleSpec::Kind::InverseT, 1.0, true, {}};
    EXPECT_THROW(make_schedule(spec), DomainError);
    const StepSchedule s = make_schedule(spec, oracle::kGamma);
    EXPECT_NEAR(s(0), oracle::kDEta, 1e-12);
}

TEST(Csv, FormatAndHeader) {
    EXPECT_EQ(format_double(0.1), "0.10000000000000001");
    EXPECT_EQ(format_double(2.0), "2");
    EXPECT_EQ(format_double(-1.5e-20), "-1.5000000000000001e-20");
    std::ostringstream out;
    TrajectoryCsvWriter w(out, figure1_params(), {oracle::kSneH, oracle::kSneL});
    TrajectoryRecord rec;
    rec.prices = {oracle::kSneH, oracle::kSneL};
    rec.references = rec.prices;
    w.write(rec);
    EXPECT_EQ(out.str(), std::string(kTrajectoryHeader) +
                             "\n0,1.9204133661392326,0.80067839909902361,1.9204133661392326,"
                             "0.80067839909902361,0,0,0,0\n");
}

TEST(Cli, ComparePath) {
    EXPECT_EQ(compare_path("figure1_c.csv"), "figure1_c_compare.csv");
    EXPECT_EQ(compare_path("out/run.csv"), "out/run_compare.csv");
}

TEST(Cli, SimulateWritesCsvAndSummary) {
    const std::string cfg = write_temp("cli_valid.json", kValidConfig);
    const RunResult r = run_cli({"simulate", "--config", cfg, "--out", "cli_sim.csv"});
    ASSERT_EQ(r.code, kOk) << r.err;
    EXPECT_EQ(summary_value(r.out, "horizon"), "200");
    EXPECT_EQ(summary_value(r.out, "csv"), "cli_sim.csv");
    EXPECT_NE(summary_value(r.out, "schedule").find("inverse_t("), std::string::npos);
    const std::string csv = slurp("cli_sim.csv");
    EXPECT_EQ(csv.rfind(std::string(kTrajectoryHeader) + "\n", 0), 0u);
    EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 202);
    EXPECT_EQ(csv.find('\r'), std::string::npos);
}

TEST(Cli, HorizonOverrideAndValidationExit) {
    const RunResult zero = run_cli({"compare", "--horizon", "0", "--out", "cli_zero.csv"});
    EXPECT_EQ(zero.code, kValidationError);
    EXPECT_NE(zero.err.find("horizon"), std::string::npos);

    const RunResult small = run_cli({"simulate", "--horizon", "10", "--out", "cli_small.csv"});
    ASSERT_EQ(small.code, kOk) << small.err;
    EXPECT_EQ(summary_value(small.out, "horizon"), "10");
}

TEST(Cli, InvalidConfigExitsWithValidationError) {
    const std::string cfg =
        write_temp("cli_bad.json", replace(kValidConfig, "\"p_hi\": 7.5", "\"p_hi\": 3.0"));
    const RunResult r = run_cli({"simulate", "--config", cfg});
    EXPECT_EQ(r.code, kValidationError);
    EXPECT_NE(r.err.find("p_hi"), std::string::npos);

    const std::string broken = write_temp("cli_broken.json", "{ \"params\": [1, }");
    const RunResult b = run_cli({"sne", "--config", broken});
    EXPECT_EQ(b.code, kValidationError);
    EXPECT_NE(b.err.find("line 1"), std::string::npos);

    EXPECT_EQ(run_cli({"sne", "--config", "missing.json"}).code, kValidationError);
    EXPECT_EQ(run_cli({"bogus"}).code, kValidationError);
    EXPECT_EQ(run_cli({}).code, kValidationError);
    EXPECT_EQ(run_cli({"figure1", "--variant", "z"}).code, kValidationError);
}

TEST(Cli, SneReportsBoundsAndCertificate) {
    const RunResult r = run_cli({"sne"});
    ASSERT_EQ(r.code, kOk) << r.err;
    EXPECT_NEAR(std::stod(summary_value(r.out, "sne_H")), oracle::kSneH, 1e-11);
    EXPECT_NEAR(std::stod(summary_value(r.out, "sne_L")), oracle::kSneL, 1e-11);
    EXPECT_EQ(summary_value(r.out, "within_bounds"), "true");
    EXPECT_EQ(summary_value(r.out, "bound_H_upper_4dp"), "3.2927");
    EXPECT_GT(std::stod(summary_value(r.out, "hessian_det")), 0.0);

    const std::string cfg = write_temp("cli_sym.json", slurp(std::string(REFGAME_CONFIG_DIR) + "/symmetric.json"));
    const RunResult s = run_cli({"sne", "--config", cfg});
    ASSERT_EQ(s.code, kOk) << s.err;
    EXPECT_EQ(summary_value(s.out, "bound_H_upper_4dp"), "7.3785");
}

TEST(Cli, CompareWritesJoinedFile) {
    const RunResult r = run_cli({"figure1", "--variant", "c", "--out", "cli_c.csv"});
    ASSERT_EQ(r.code, kOk) << r.err;
    EXPECT_LT(std::stod(summary_value(r.out, "terminal_gap_inf")), 2e-3);
    const std::string joined = slurp("cli_c_compare.csv");
    EXPECT_EQ(joined.rfind("t,opga_r_H,opga_r_L,eq_r_H,eq_r_L,ref_gap\n", 0), 0u);
    EXPECT_EQ(std::count(joined.begin(), joined.end(), '\n'), 1002);
}

TEST(Cli, FigureVariantBCycles) {
    const RunResult r = run_cli({"figure1", "--variant", "b", "--out", "cli_b.csv"});
    ASSERT_EQ(r.code, kOk) << r.err;
    EXPECT_EQ(summary_value(r.out, "verdict"), "CYCLING");
    EXPECT_EQ(summary_value(r.out, "rate_converged"), "false");
}

TEST(Cli, RepeatedRunsAreByteIdentical) {
    ASSERT_EQ(run_cli({"figure1", "--variant", "a", "--horizon", "5000", "--out", "cli_d1.csv"}).code, kOk);
    ASSERT_EQ(run_cli({"figure1", "--variant", "a", "--horizon", "5000", "--out", "cli_d2.csv"}).code, kOk);
    const std::string a = slurp("cli_d1.csv");
    EXPECT_FALSE(a.empty());
    EXPECT_EQ(a, slurp("cli_d2.csv"));
}

TEST(Cli, VerifyPassesOnFigure1) {
    const RunResult r = run_cli({"verify", "--random", "5", "--seed", "9"});
    EXPECT_EQ(r.code, kOk) << r.out << r.err;
    EXPECT_EQ(summary_value(r.out, "property.gradient_vs_finite_difference"), "100/100");
    EXPECT_EQ(summary_value(r.out, "property.sweep_sne_containment"), "5/5");
    EXPECT_EQ(summary_value(r.out, "all_passed"), "true");
    EXPECT_LT(std::stod(summary_value(r.out, "property.gradient_vs_finite_difference.worst")), 1e-6);
}

TEST(Cli, ExecutableExitCodes) {
    const std::string exe = REFGAME_CLI_PATH;
    EXPECT_EQ(std::system((exe + " sne > /dev/null").c_str()), 0);
    const int rc = std::system((exe + " compare --horizon 0 > /dev/null 2>&1").c_str());
    EXPECT_TRUE(WIFEXITED(rc));
    EXPECT_EQ(WEXITSTATUS(rc), kValidationError);
}
