#include "refgame_cli/config.hpp"

#include <cmath>
#include <fstream>
#include <iterator>
#include <sstream>

#include <json.hpp>

#include "refgame/equilibrium.hpp"

namespace refgame::cli {
namespace {

using nlohmann::json;

std::string line_column(const std::string& text, std::size_t byte) {
    std::size_t line = 1;
    std::size_t col = 1;
    for (std::size_t k = 0; k < byte && k < text.size(); ++k) {
        if (text[k] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

const json& member(const json& obj, const std::string& key, const std::string& path) {
    if (!obj.is_object()) {
        throw ConfigError(path, "expected an object");
    }
    auto it = obj.find(key);
    if (it == obj.end()) {
        throw ConfigError(path + "." + key, "missing field");
    }
    return *it;
}

double number(const json& obj, const std::string& key, const std::string& path) {
    const json& v = member(obj, key, path);
    if (!v.is_number()) {
        throw ConfigError(path + "." + key, "expected a number");
    }
    const double x = v.get<double>();
    if (!std::isfinite(x)) {
        throw ConfigError(path + "." + key, "must be finite");
    }
    return x;
}

FirmParams parse_firm(const json& obj, const std::string& path) {
    return {number(obj, "a", path), number(obj, "b", path), number(obj, "c", path)};
}

PricePair parse_pair(const json& obj, const std::string& path) {
    if (obj.is_array()) {
        if (obj.size() != 2 || !obj[0].is_number() || !obj[1].is_number()) {
            throw ConfigError(path, "expected [H, L] with two numbers");
        }
        return {obj[0].get<double>(), obj[1].get<double>()};
    }
    return {number(obj, "H", path), number(obj, "L", path)};
}

ScheduleSpec parse_schedule(const json& obj, const std::string& path) {
    const json& kind = member(obj, "kind", path);
    if (!kind.is_string()) {
        throw ConfigError(path + ".kind", "expected a string");
    }
    const std::string k = kind.get<std::string>();
    ScheduleSpec s;
    if (k == "constant") {
        s.kind = ScheduleSpec::Kind::Constant;
        s.value = number(obj, "eta", path);
    } else if (k == "inverse_sqrt") {
        s.kind = ScheduleSpec::Kind::InverseSqrt;
        s.value = number(obj, "scale", path);
    } else if (k == "inverse_t") {
        s.kind = ScheduleSpec::Kind::InverseT;
        const json& scale = member(obj, "scale", path);
        if (scale.is_string() && scale.get<std::string>() == "auto") {
            s.auto_scale = true;
        } else {
            s.value = number(obj, "scale", path);
        }
    } else if (k == "explicit") {
        s.kind = ScheduleSpec::Kind::Explicit;
        const json& etas = member(obj, "etas", path);
        if (!etas.is_array() || etas.empty()) {
            throw ConfigError(path + ".etas", "expected a non-empty array of numbers");
        }
        for (std::size_t i = 0; i < etas.size(); ++i) {
            if (!etas[i].is_number()) {
                throw ConfigError(path + ".etas[" + std::to_string(i) + "]", "expected a number");
            }
            s.etas.push_back(etas[i].get<double>());
        }
    } else {
        throw ConfigError(path + ".kind",
                          "unknown schedule '" + k + "' (constant|inverse_sqrt|inverse_t|explicit)");
    }
    return s;
}

json pair_json(const PricePair& p) { return json{{"H", p.h}, {"L", p.l}}; }

json firm_json(const FirmParams& f) { return json{{"a", f.a}, {"b", f.b}, {"c", f.c}}; }

}  // namespace

ExperimentConfig parse_config(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(line_column(text, e.byte == 0 ? 0 : e.byte - 1), e.what());
    }

    ExperimentConfig cfg;
    const json& p = member(doc, "params", "config");
    cfg.params.firm_h = parse_firm(member(p, "firm_H", "params"), "params.firm_H");
    cfg.params.firm_l = parse_firm(member(p, "firm_L", "params"), "params.firm_L");
    cfg.params.alpha = number(p, "alpha", "params");
    cfg.params.p_lo = number(p, "p_lo", "params");
    cfg.params.p_hi = number(p, "p_hi", "params");

    cfg.init.prices = parse_pair(member(doc, "init_prices", "config"), "init_prices");
    cfg.init.references = parse_pair(member(doc, "init_references", "config"), "init_references");
    cfg.schedule = parse_schedule(member(doc, "schedule", "config"), "schedule");

    const json& horizon = member(doc, "horizon", "config");
    if (!horizon.is_number_integer()) {
        throw ConfigError("horizon", "expected an integer");
    }
    cfg.horizon = horizon.get<std::int64_t>();

    if (auto it = doc.find("output_path"); it != doc.end()) {
        if (!it->is_string()) {
            throw ConfigError("output_path", "expected a string");
        }
        cfg.output_path = it->get<std::string>();
    }
    if (auto it = doc.find("seed"); it != doc.end()) {
        if (!it->is_number_unsigned()) {
            throw ConfigError("seed", "expected a non-negative integer");
        }
        cfg.seed = it->get<std::uint64_t>();
    }
    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ConfigError(path, "cannot open config file");
    }
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    try {
        return parse_config(text);
    } catch (const ConfigError& e) {
        throw ConfigError(path + ": " + e.where(), std::string(e.what()).substr(e.where().size() + 2));
    }
}

void validate_config(const ExperimentConfig& cfg) {
    if (cfg.horizon < 1) {
        throw ConfigError("horizon", "must be at least 1");
    }
    try {
        cfg.params.validate();
    } catch (const DomainError& e) {
        throw ConfigError("params", e.what());
    }
    const BoxCheck box = validate_price_box(cfg.params);
    if (!box.ok()) {
        throw ConfigError("params.p_lo/p_hi", "price box does not contain the equilibrium bounds\n" +
                                                  box.describe());
    }
    auto inside = [&](const PricePair& x) {
        return x.h >= cfg.params.p_lo && x.h <= cfg.params.p_hi && x.l >= cfg.params.p_lo &&
               x.l <= cfg.params.p_hi;
    };
    if (!inside(cfg.init.prices)) {
        throw ConfigError("init_prices", "must lie inside [p_lo, p_hi]");
    }
    if (!inside(cfg.init.references)) {
        throw ConfigError("init_references", "must lie inside [p_lo, p_hi]");
    }
    try {
        if (!cfg.schedule.auto_scale) {
            const StepSchedule s = make_schedule(cfg.schedule);
            if (static_cast<std::size_t>(cfg.horizon) > s.length()) {
                throw ConfigError("schedule.etas", "shorter than the horizon");
            }
        }
    } catch (const DomainError& e) {
        throw ConfigError("schedule", e.what());
    }
}

StepSchedule make_schedule(const ScheduleSpec& spec, std::optional<double> gamma_estimate) {
    switch (spec.kind) {
        case ScheduleSpec::Kind::Constant:
            return StepSchedule::constant(spec.value);
        case ScheduleSpec::Kind::InverseSqrt:
            return StepSchedule::inverse_sqrt(spec.value);
        case ScheduleSpec::Kind::InverseT:
            if (spec.auto_scale) {
                if (!gamma_estimate) {
                    throw DomainError("auto-scaled inverse_t schedule needs a gamma estimate");
                }
                return StepSchedule::inverse_t(2.0 / *gamma_estimate);
            }
            return StepSchedule::inverse_t(spec.value);
        case ScheduleSpec::Kind::Explicit:
            return StepSchedule::explicit_sequence(spec.etas);
    }
    throw DomainError("unknown schedule kind");
}

ExperimentConfig figure1_config(Figure1Variant variant) {
    ExperimentConfig cfg;
    cfg.params = figure1_params();
    cfg.init = figure1_initial_state();
    switch (variant) {
        case Figure1Variant::A:
            cfg.schedule = {ScheduleSpec::Kind::InverseSqrt, 1.0, false, {}};
            cfg.horizon = 100'000;
            cfg.output_path = "figure1_a.csv";
            break;
        case Figure1Variant::B:
            cfg.schedule = {ScheduleSpec::Kind::Constant, 1.0, false, {}};
            cfg.horizon = 10'000;
            cfg.output_path = "figure1_b.csv";
            break;
        case Figure1Variant::C:
            cfg.schedule = {ScheduleSpec::Kind::InverseSqrt, 1.0, false, {}};
            cfg.horizon = 1'000;
            cfg.output_path = "figure1_c.csv";
            break;
    }
    return cfg;
}

std::string to_json(const ExperimentConfig& cfg) {
    json sched;
    switch (cfg.schedule.kind) {
        case ScheduleSpec::Kind::Constant:
            sched = {{"kind", "constant"}, {"eta", cfg.schedule.value}};
            break;
        case ScheduleSpec::Kind::InverseSqrt:
            sched = {{"kind", "inverse_sqrt"}, {"scale", cfg.schedule.value}};
            break;
        case ScheduleSpec::Kind::InverseT:
            sched = {{"kind", "inverse_t"}};
            if (cfg.schedule.auto_scale) {
                sched["scale"] = "auto";
            } else {
                sched["scale"] = cfg.schedule.value;
            }
            break;
        case ScheduleSpec::Kind::Explicit:
            sched = {{"kind", "explicit"}, {"etas", cfg.schedule.etas}};
            break;
    }
    json doc = {
        {"params",
         {{"firm_H", firm_json(cfg.params.firm_h)},
          {"firm_L", firm_json(cfg.params.firm_l)},
          {"alpha", cfg.params.alpha},
          {"p_lo", cfg.params.p_lo},
          {"p_hi", cfg.params.p_hi}}},
        {"init_prices", pair_json(cfg.init.prices)},
        {"init_references", pair_json(cfg.init.references)},
        {"schedule", sched},
        {"horizon", cfg.horizon},
        {"output_path", cfg.output_path},
        {"seed", cfg.seed},
    };
    return doc.dump(2);
}

}  // namespace refgame::cli
