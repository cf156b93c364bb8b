#include "refgame_cli/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include <CLI11.hpp>

#include "refgame/analysis.hpp"
#include "refgame/equilibrium.hpp"
#include "refgame/game_dynamics.hpp"
#include "refgame_cli/csv.hpp"
#include "refgame_cli/verify.hpp"

namespace refgame::cli {
namespace {

constexpr double kCycleTailFraction = 0.1;
constexpr double kRateWindowFraction = 0.5;

double inf_dist(const PricePair& x, const PricePair& y) {
    return std::max(std::abs(x.h - y.h), std::abs(x.l - y.l));
}

std::string fixed4(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.4f", x);
    return buf;
}

/// Runs validation and the SNE solve shared by every trajectory command.
/// Returns an exit code; kOk means `sol` is populated.
int prepare(const ExperimentConfig& cfg, SneSolution& sol, std::ostream& err) {
    try {
        validate_config(cfg);
    } catch (const ConfigError& e) {
        err << "error: invalid config: " << e.what() << "\n";
        return kValidationError;
    }
    try {
        sol = solve_sne(cfg.params);
    } catch (const SolverFailure& e) {
        err << "error: " << e.what() << "\nconfig:\n" << to_json(cfg) << "\n";
        return kSolverFailure;
    }
    return kOk;
}

void put_pair(Summary& s, const std::string& key, const PricePair& p) {
    s.put(key + "_H", p.h);
    s.put(key + "_L", p.l);
}

}  // namespace

void Summary::put(const std::string& key, const std::string& value) {
    out_ << key << " = " << value << '\n';
}

void Summary::put(const std::string& key, double value) { put(key, format_double(value)); }

void Summary::put(const std::string& key, std::int64_t value) { put(key, std::to_string(value)); }

void Summary::put(const std::string& key, bool value) {
    put(key, std::string(value ? "true" : "false"));
}

std::string compare_path(const std::string& output_path) {
    std::filesystem::path p(output_path);
    std::filesystem::path name = p.stem();
    name += "_compare.csv";
    return (p.parent_path() / name).string();
}

int cmd_simulate(const ExperimentConfig& cfg, std::ostream& out, std::ostream& err) {
    SneSolution sol;
    if (int rc = prepare(cfg, sol, err); rc != kOk) {
        return rc;
    }
    try {
        const StepSchedule schedule = make_schedule(cfg.schedule, sol.hessian.gamma_estimate);
        std::ofstream file = open_output(cfg.output_path);
        TrajectoryCsvWriter writer(file, cfg.params, sol.prices);

        const bool retain = cfg.horizon < kMaxRetainedRecords;
        Trajectory traj;
        traj.params = cfg.params;
        traj.schedule = schedule.describe();
        TrajectoryRecord last;
        simulate(cfg.params, cfg.init, schedule, cfg.horizon, [&](const TrajectoryRecord& rec) {
            writer.write(rec);
            if (retain) {
                traj.records.push_back(rec);
            }
            last = rec;
        });
        file.close();
        if (!file) {
            err << "error: failed writing " << cfg.output_path << "\n";
            return kValidationError;
        }

        Summary s(out);
        s.put("command", std::string("simulate"));
        s.put("schedule", schedule.describe());
        s.put("horizon", cfg.horizon);
        put_pair(s, "sne", sol.prices);
        put_pair(s, "terminal_p", last.prices);
        put_pair(s, "terminal_r", last.references);
        s.put("terminal_price_dist_inf", inf_dist(last.prices, sol.prices));
        s.put("terminal_reference_dist_inf", inf_dist(last.references, sol.prices));
        if (retain) {
            const CycleVerdict verdict = cycle_detector(traj, sol.prices, kCycleTailFraction);
            const RateReport rate = rate_fit(traj, sol.prices, kRateWindowFraction);
            s.put("verdict", std::string(to_string(verdict)));
            s.put("rate_window_start", rate.t_start);
            s.put("rate_window_end", rate.t_end);
            s.put("rate_sup_t_dist2", rate.sup_t_dist2);
            s.put("rate_sup_t2_gap2", rate.sup_t2_gap2);
            s.put("rate_converged", rate.converged);
        } else {
            s.put("verdict", std::string(to_string(CycleVerdict::Undecided)));
        }
        s.put("csv", cfg.output_path);
    } catch (const DomainError& e) {
        err << "error: " << e.what() << "\n";
        return kValidationError;
    } catch (const SolverFailure& e) {
        err << "error: " << e.what() << "\n";
        return kSolverFailure;
    } catch (const std::runtime_error& e) {
        err << "error: " << e.what() << "\n";
        return kValidationError;
    }
    return kOk;
}

int cmd_sne(const ExperimentConfig& cfg, std::ostream& out, std::ostream& err) {
    SneSolution sol;
    if (int rc = prepare(cfg, sol, err); rc != kOk) {
        return rc;
    }
    Summary s(out);
    s.put("command", std::string("sne"));
    put_pair(s, "sne", sol.prices);
    s.put("residual", sol.residual);
    s.put("iterations", sol.iterations);
    s.put("damping", sol.damping);
    for (Firm i : kFirms) {
        const std::string f = to_string(i);
        s.put("bound_" + f + "_lower", sol.bounds[i].lower);
        s.put("bound_" + f + "_upper", sol.bounds[i].upper);
        s.put("bound_" + f + "_upper_4dp", fixed4(sol.bounds[i].upper));
    }
    s.put("within_bounds", sol.within_bounds());
    s.put("hessian_11", sol.hessian.matrix[0][0]);
    s.put("hessian_12", sol.hessian.matrix[0][1]);
    s.put("hessian_21", sol.hessian.matrix[1][0]);
    s.put("hessian_22", sol.hessian.matrix[1][1]);
    s.put("hessian_det", sol.hessian.det);
    s.put("hessian_trace", sol.hessian.trace);
    s.put("hessian_min_eigenvalue", sol.hessian.min_eigenvalue);
    s.put("gamma_estimate", sol.hessian.gamma_estimate);
    if (!sol.within_bounds()) {
        err << "error: solved equilibrium violates its bounds\n";
        return kPropertyFailure;
    }
    return kOk;
}

int cmd_compare(const ExperimentConfig& cfg, std::ostream& out, std::ostream& err) {
    SneSolution sol;
    if (int rc = prepare(cfg, sol, err); rc != kOk) {
        return rc;
    }
    try {
        const StepSchedule schedule = make_schedule(cfg.schedule, sol.hessian.gamma_estimate);
        const Trajectory opga = simulate(cfg.params, cfg.init, schedule, cfg.horizon);
        Trajectory eq;
        try {
            eq = equilibrium_path(cfg.params, cfg.init.references, cfg.horizon);
        } catch (const SolverFailure& e) {
            err << "error: " << e.what() << "\nconfig:\n" << to_json(cfg) << "\n";
            return kSolverFailure;
        }

        {
            std::ofstream file = open_output(cfg.output_path);
            TrajectoryCsvWriter writer(file, cfg.params, sol.prices);
            for (const TrajectoryRecord& rec : opga.records) {
                writer.write(rec);
            }
        }
        const std::string joined = compare_path(cfg.output_path);
        {
            std::ofstream file = open_output(joined);
            file << "t,opga_r_H,opga_r_L,eq_r_H,eq_r_L,ref_gap\n";
            for (std::size_t k = 0; k < opga.records.size(); ++k) {
                const PricePair& a = opga.records[k].references;
                const PricePair& b = eq.records[k].references;
                file << opga.records[k].t << ',' << format_double(a.h) << ',' << format_double(a.l)
                     << ',' << format_double(b.h) << ',' << format_double(b.l) << ','
                     << format_double(std::hypot(a.h - b.h, a.l - b.l)) << '\n';
            }
        }

        const PricePair& r_opga = opga.records.back().references;
        const PricePair& r_eq = eq.records.back().references;
        Summary s(out);
        s.put("command", std::string("compare"));
        s.put("schedule", schedule.describe());
        s.put("horizon", cfg.horizon);
        put_pair(s, "sne", sol.prices);
        put_pair(s, "opga_terminal_r", r_opga);
        put_pair(s, "equilibrium_terminal_r", r_eq);
        s.put("opga_terminal_reference_dist_inf", inf_dist(r_opga, sol.prices));
        s.put("equilibrium_terminal_reference_dist_inf", inf_dist(r_eq, sol.prices));
        s.put("terminal_gap_inf", inf_dist(r_opga, r_eq));
        s.put("csv", cfg.output_path);
        s.put("compare_csv", joined);
    } catch (const DomainError& e) {
        err << "error: " << e.what() << "\n";
        return kValidationError;
    } catch (const SolverFailure& e) {
        err << "error: " << e.what() << "\n";
        return kSolverFailure;
    } catch (const std::runtime_error& e) {
        err << "error: " << e.what() << "\n";
        return kValidationError;
    }
    return kOk;
}

int cmd_verify(const VerifyOptions& opts, std::ostream& out, std::ostream& err) {
    if (opts.random_instances < 0) {
        err << "error: --random must be non-negative\n";
        return kValidationError;
    }
    std::vector<PropertyResult> results;

    SneSolution sol;
    try {
        opts.params.validate();
        sol = solve_sne(opts.params);
    } catch (const DomainError& e) {
        err << "error: " << e.what() << "\n";
        return kValidationError;
    } catch (const SolverFailure& e) {
        err << "error: " << e.what() << "\n";
        return kSolverFailure;
    }

    std::mt19937_64 rng(opts.seed);
    results.push_back(check_gradients(opts.params, 100, rng));
    results.push_back(check_bound_constants(opts.params, 10'000, rng));
    results.push_back(check_g_positivity(opts.params, sol.prices, 100, 1e-3));
    results.push_back(check_shell_monotonicity(opts.params, sol.prices));
    results.push_back(check_hessian(opts.params, sol.prices));
    {
        PropertyResult growth{"quadratic_growth"};
        growth.worst = quadratic_growth_radius(opts.params, sol.prices, sol.hessian);
        growth.record(growth.worst > 0.0);
        results.push_back(growth);
    }

    PropertyResult solved{"sweep_solver_success"};
    PropertyResult containment{"sweep_sne_containment"};
    PropertyResult hess{"sweep_hessian_certificate"};
    PropertyResult bounds{"sweep_bound_constants"};
    PropertyResult grads{"sweep_gradients"};
    std::mt19937_64 sweep_rng(opts.seed ^ 0x9e3779b97f4a7c15ULL);
    for (std::int64_t n = 0; n < opts.random_instances; ++n) {
        const MarketParams m = random_instance(sweep_rng);
        SneSolution s;
        try {
            s = solve_sne(m);
            solved.record(true);
        } catch (const std::exception&) {
            solved.record(false);
            containment.record(false);
            hess.record(false);
            bounds.record(false);
            grads.record(false);
            continue;
        }
        containment.record(s.within_bounds());
        const PropertyResult h = check_hessian(m, s.prices);
        hess.record(h.ok());
        hess.worst = std::max(hess.worst, h.worst);
        const PropertyResult b = check_bound_constants(m, 1'000, sweep_rng);
        bounds.record(b.ok());
        bounds.worst = std::max(bounds.worst, b.worst);
        const PropertyResult g = check_gradients(m, 20, sweep_rng);
        grads.record(g.ok());
        grads.worst = std::max(grads.worst, g.worst);
    }
    for (PropertyResult* r : {&solved, &containment, &hess, &bounds, &grads}) {
        results.push_back(*r);
    }

    Summary s(out);
    s.put("command", std::string("verify"));
    s.put("random_instances", opts.random_instances);
    s.put("seed", static_cast<std::int64_t>(opts.seed));
    bool all_ok = true;
    for (const PropertyResult& r : results) {
        s.put("property." + r.name, std::to_string(r.passed) + "/" + std::to_string(r.total));
        s.put("property." + r.name + ".worst", r.worst);
        all_ok = all_ok && r.ok();
    }
    s.put("all_passed", all_ok);
    return all_ok ? kOk : kPropertyFailure;
}

int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Duopoly price competition with reference effects: OPGA simulation and equilibria"};
    app.require_subcommand(1);

    std::string config_path;
    std::string variant = "a";
    std::int64_t horizon = 0;
    std::int64_t random_n = 0;
    std::uint64_t seed = 0;
    std::string out_path;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "JSON experiment config (default: figure1 preset, variant a)");
        sub->add_option("--horizon", horizon, "Override the horizon");
        sub->add_option("--out", out_path, "Output CSV path");
    };
    CLI::App* simulate_cmd = app.add_subcommand("simulate", "Run OPGA and write the trajectory CSV");
    add_common(simulate_cmd);
    CLI::App* sne_cmd = app.add_subcommand("sne", "Solve the stationary Nash equilibrium");
    add_common(sne_cmd);
    CLI::App* compare_cmd =
        app.add_subcommand("compare", "OPGA against the equilibrium-policy path");
    add_common(compare_cmd);
    CLI::App* verify_cmd = app.add_subcommand("verify", "Run the numerical property suites");
    verify_cmd->add_option("--config", config_path, "Instance for the fixed-grid checks");
    verify_cmd->add_option("--random", random_n, "Number of random instances");
    verify_cmd->add_option("--seed", seed, "Seed of the random sweeps");
    CLI::App* fig_cmd = app.add_subcommand("figure1", "Run one of the bundled preset experiments");
    fig_cmd->add_option("--variant", variant, "a: 1/sqrt(t) steps, b: constant steps, c: compare")
        ->check(CLI::IsMember({"a", "b", "c"}));
    fig_cmd->add_option("--horizon", horizon, "Override the horizon");
    fig_cmd->add_option("--out", out_path, "Output CSV path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        std::ostringstream msg;
        const int rc = app.exit(e, msg, msg);
        (rc == 0 ? out : err) << msg.str();
        return rc == 0 ? kOk : kValidationError;
    }

    auto load = [&](ExperimentConfig fallback) -> ExperimentConfig {
        ExperimentConfig cfg = config_path.empty() ? std::move(fallback) : load_config(config_path);
        if (simulate_cmd->count("--horizon") + sne_cmd->count("--horizon") +
                compare_cmd->count("--horizon") + fig_cmd->count("--horizon") > 0) {
            cfg.horizon = horizon;
        }
        if (!out_path.empty()) {
            cfg.output_path = out_path;
        }
        return cfg;
    };

    try {
        if (*verify_cmd) {
            VerifyOptions opts;
            if (!config_path.empty()) {
                opts.params = load_config(config_path).params;
            }
            opts.random_instances = random_n;
            opts.seed = seed;
            return cmd_verify(opts, out, err);
        }
        if (*fig_cmd) {
            const Figure1Variant v = variant == "b"   ? Figure1Variant::B
                                     : variant == "c" ? Figure1Variant::C
                                                      : Figure1Variant::A;
            const ExperimentConfig cfg = load(figure1_config(v));
            return v == Figure1Variant::C ? cmd_compare(cfg, out, err) : cmd_simulate(cfg, out, err);
        }
        const ExperimentConfig cfg = load(figure1_config(Figure1Variant::A));
        if (*simulate_cmd) {
            return cmd_simulate(cfg, out, err);
        }
        if (*sne_cmd) {
            return cmd_sne(cfg, out, err);
        }
        return cmd_compare(cfg, out, err);
    } catch (const ConfigError& e) {
        err << "error: invalid config: " << e.what() << "\n";
        return kValidationError;
    }
}

}  // namespace refgame::cli
