// config.cpp - Run configuration parsing and validation

#include "xyotto/config.hpp"

#include "xyotto/errors.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace xyotto {

std::string to_string(Command c) {
    switch (c) {
        case Command::Cycle: return "cycle";
        case Command::Sweep: return "sweep";
        case Command::Adiabaticity: return "adiabaticity";
        case Command::Efficiency: return "efficiency";
        case Command::Gap: return "gap";
        case Command::Verify: return "verify";
    }
    return "cycle";
}

std::string to_string(Format f) { return f == Format::Csv ? "csv" : "json"; }

namespace {

Command parse_command(const std::string& s) {
    for (Command c : {Command::Cycle, Command::Sweep, Command::Adiabaticity, Command::Efficiency,
                      Command::Gap, Command::Verify}) {
        if (to_string(c) == s) return c;
    }
    throw ConfigError("command", "unknown command '" + s +
                                     "' (expected cycle, sweep, adiabaticity, efficiency, gap or verify)");
}

Format parse_format(const std::string& s) {
    if (s == "csv") return Format::Csv;
    if (s == "json") return Format::Json;
    throw ConfigError("format", "unknown format '" + s + "' (expected csv or json)");
}

ScheduleKind parse_schedule(const std::string& s) {
    try {
        return parse_schedule_kind(s);
    } catch (const std::invalid_argument& e) {
        throw ConfigError("schedule", e.what());
    }
}

double parse_number(const std::string& text, const std::string& field) {
    try {
        std::size_t used = 0;
        const double v = std::stod(text, &used);
        if (used != text.size()) throw std::invalid_argument(text);
        return v;
    } catch (const std::exception&) {
        throw ConfigError(field, "expected a number, got '" + text + "'");
    }
}

std::vector<double> parse_list(const std::string& text, const std::string& field) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(parse_number(item, field));
    return out;
}

std::string fmt_value(double v) { return detail::to_text(v); }

AxisSpec axis_from_json(const nlohmann::json& v, const std::string& field) {
    if (v.is_string()) return parse_axis(v.get<std::string>(), field);
    if (!v.is_object()) throw ConfigError(field, "expected \"min:max:count[:log]\" or an object");
    AxisSpec a;
    a.log = false;
    for (const auto& [key, val] : v.items()) {
        if (key == "min") {
            a.min = val.get<double>();
        } else if (key == "max") {
            a.max = val.get<double>();
        } else if (key == "count") {
            if (!val.is_number_integer() || val.get<long long>() < 0) {
                throw ConfigError(field + ".count", "expected a nonnegative integer");
            }
            a.count = val.get<std::size_t>();
        } else if (key == "log") {
            a.log = val.get<bool>();
        } else {
            throw ConfigError(field + "." + key, "unknown field");
        }
    }
    for (const char* k : {"min", "max", "count"}) {
        if (!v.contains(k)) throw ConfigError(field + "." + k, "missing required field");
    }
    return a;
}

}  // namespace

AxisSpec parse_axis(const std::string& text, const std::string& field) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ':')) parts.push_back(item);
    if (parts.size() < 3 || parts.size() > 4) {
        throw ConfigError(field, "expected min:max:count[:log], got '" + text + "'");
    }
    AxisSpec a;
    a.min = parse_number(parts[0], field);
    a.max = parse_number(parts[1], field);
    const double count = parse_number(parts[2], field);
    if (!(count >= 0) || count != std::floor(count)) {
        throw ConfigError(field, "count must be a nonnegative integer, got '" + parts[2] + "'");
    }
    a.count = static_cast<std::size_t>(count);
    a.log = false;
    if (parts.size() == 4) {
        if (parts[3] == "log") {
            a.log = true;
        } else if (parts[3] != "linear" && parts[3] != "lin") {
            throw ConfigError(field, "axis scale must be 'log' or 'linear', got '" + parts[3] + "'");
        }
    }
    return a;
}

RunConfig parse_config_json(const nlohmann::json& j) {
    if (!j.is_object()) throw ConfigError("config", "top level must be a JSON object");
    RunConfig c;
    for (const auto& [key, v] : j.items()) {
        try {
            if (key == "command") c.command = parse_command(v.get<std::string>());
            else if (key == "jx") c.jx = v.get<double>();
            else if (key == "jy") c.jy = v.get<double>();
            else if (key == "h1") c.h1 = v.get<double>();
            else if (key == "h2") c.h2 = v.get<double>();
            else if (key == "t1") c.t1 = v.get<double>();
            else if (key == "t2") c.t2 = v.get<double>();
            else if (key == "tau") c.tau = v.get<double>();
            else if (key == "p") c.p = v.get<double>();
            else if (key == "p_list") c.p_list = v.get<std::vector<double>>();
            else if (key == "schedule") c.schedule = parse_schedule(v.get<std::string>());
            else if (key == "grid_t1") c.grid_t1 = axis_from_json(v, key);
            else if (key == "grid_t2") c.grid_t2 = axis_from_json(v, key);
            else if (key == "grid_tau") c.grid_tau = axis_from_json(v, key);
            else if (key == "out") c.out = v.get<std::string>();
            else if (key == "format") c.format = parse_format(v.get<std::string>());
            else if (key == "seed") {
                if (!v.is_number_unsigned()) throw ConfigError(key, "expected a nonnegative integer");
                c.seed = v.get<std::uint64_t>();
            } else if (key == "workers") {
                if (!v.is_number_unsigned()) throw ConfigError(key, "expected a nonnegative integer");
                c.workers = v.get<unsigned>();
            } else if (key == "wall_time") c.wall_time = v.get<bool>();
            else throw ConfigError(key, "unknown field");
        } catch (const nlohmann::json::exception& e) {
            throw ConfigError(key, std::string("wrong type: ") + e.what());
        }
    }
    return c;
}

RunConfig parse_config(const std::vector<std::string>& args) {
    CLI::App app{"Finite-time two-qubit XY quantum Otto cycle", "xyotto"};
    std::string config_path, command, schedule, format, grid_t1, grid_t2, grid_tau, out, p_list;
    double jx = 0, jy = 0, h1 = 0, h2 = 0, t1 = 0, t2 = 0, tau = 0, p = 0;
    std::uint64_t seed = 0;
    unsigned workers = 0;
    bool wall_time = false;

    app.add_option("--config", config_path, "JSON config file; flags override its values");
    app.add_option("--command", command, "cycle | sweep | adiabaticity | efficiency | gap | verify");
    app.add_option("--jx", jx, "Coupling Jx");
    app.add_option("--jy", jy, "Coupling Jy");
    app.add_option("--h1", h1, "High field h1");
    app.add_option("--h2", h2, "Low field h2");
    app.add_option("--t1", t1, "Temperature of bath 1 (in contact at h1)");
    app.add_option("--t2", t2, "Temperature of bath 2 (in contact at h2)");
    app.add_option("--tau", tau, "Unitary stroke duration; P from the dynamics");
    app.add_option("--p", p, "Explicit adiabaticity P");
    app.add_option("--p-list", p_list, "Extra adiabaticities, comma separated");
    app.add_option("--grid-t1", grid_t1, "T1 axis min:max:count[:log]");
    app.add_option("--grid-t2", grid_t2, "T2 axis min:max:count[:log]");
    app.add_option("--grid-tau", grid_tau, "tau axis min:max:count[:log]");
    app.add_option("--out", out, "Output path (default: stdout)");
    app.add_option("--format", format, "csv | json");
    app.add_option("--seed", seed, "Seed for the verify suite");
    app.add_option("--schedule", schedule, "sqrt-linear | linear-h | linear-h2");
    app.add_option("--workers", workers, "Worker threads for sweeps (0: all cores)");
    app.add_flag("--wall-time", wall_time, "Record wall time in the output header");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        throw HelpRequested{app.help()};
    } catch (const CLI::ParseError& e) {
        throw ConfigError("flags", e.what());
    }

    RunConfig c;
    bool has_command = false;
    if (!config_path.empty()) {
        std::ifstream in(config_path);
        if (!in) throw ConfigError("config", "cannot open '" + config_path + "'");
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(in);
        } catch (const nlohmann::json::parse_error& e) {
            throw ConfigError("config", "malformed JSON in '" + config_path + "': " + e.what());
        }
        c = parse_config_json(j);
        has_command = j.contains("command");
    }

    auto given = [&](const char* name) { return app.count(name) > 0; };
    if (given("--command")) {
        c.command = parse_command(command);
        has_command = true;
    }
    if (given("--jx")) c.jx = jx;
    if (given("--jy")) c.jy = jy;
    if (given("--h1")) c.h1 = h1;
    if (given("--h2")) c.h2 = h2;
    if (given("--t1")) c.t1 = t1;
    if (given("--t2")) c.t2 = t2;
    if (given("--tau")) c.tau = tau;
    if (given("--p")) c.p = p;
    if (given("--p-list")) c.p_list = parse_list(p_list, "p_list");
    if (given("--grid-t1")) c.grid_t1 = parse_axis(grid_t1, "grid_t1");
    if (given("--grid-t2")) c.grid_t2 = parse_axis(grid_t2, "grid_t2");
    if (given("--grid-tau")) c.grid_tau = parse_axis(grid_tau, "grid_tau");
    if (given("--out")) c.out = out;
    if (given("--format")) c.format = parse_format(format);
    if (given("--seed")) c.seed = seed;
    if (given("--schedule")) c.schedule = parse_schedule(schedule);
    if (given("--workers")) c.workers = workers;
    if (given("--wall-time")) c.wall_time = wall_time;

    if (!has_command) throw ConfigError("command", "missing required field");
    resolve(c);
    return c;
}

namespace {

void require(const std::optional<double>& v, const char* field) {
    if (!v) throw ConfigError(field, "missing required field");
    if (!std::isfinite(*v)) throw ConfigError(field, "must be finite");
}

void forbid(bool present, const char* field, const std::string& why) {
    if (present) throw ConfigError(field, why);
}

void check_axis(const std::optional<AxisSpec>& a, const char* field, bool positive) {
    if (!a) return;
    if (a->count < 2) throw ConfigError(field, "count must be >= 2");
    if (!std::isfinite(a->min) || !std::isfinite(a->max)) throw ConfigError(field, "bounds must be finite");
    if (!(a->min < a->max)) {
        throw ConfigError(field, "requires min < max (got min=" + fmt_value(a->min) +
                                     ", max=" + fmt_value(a->max) + ")");
    }
    if ((positive || a->log) && !(a->min > 0)) throw ConfigError(field, "requires min > 0");
}

void exactly_one_of_tau_p(const RunConfig& c) {
    if (c.tau && c.p) throw ConfigError("tau", "give exactly one of tau (schedule) and p (explicit P), not both");
    if (!c.tau && !c.p) throw ConfigError("tau", "missing: give exactly one of tau (schedule) and p (explicit P)");
}

}  // namespace

void resolve(RunConfig& c) {
    const std::string cmd = to_string(c.command);
    const std::string unused = "not used by command " + cmd;

    if (c.command != Command::Verify) {
        require(c.jx, "jx");
        require(c.jy, "jy");
        require(c.h1, "h1");
        require(c.h2, "h2");
        if (*c.jx < 0) throw ConfigError("jx", "couplings must satisfy Jx >= 0 (got " + fmt_value(*c.jx) + ")");
        if (*c.jy < 0) throw ConfigError("jy", "couplings must satisfy Jy >= 0 (got " + fmt_value(*c.jy) + ")");
        if (!(*c.h2 > 0)) throw ConfigError("h2", "fields must satisfy h2 > 0 (got " + fmt_value(*c.h2) + ")");
        if (!(*c.h1 > *c.h2)) {
            throw ConfigError("h1", "fields must satisfy h1 > h2 (got h1=" + fmt_value(*c.h1) +
                                        ", h2=" + fmt_value(*c.h2) + ")");
        }
    }
    if (c.t1 && !(*c.t1 > 0 && std::isfinite(*c.t1))) throw ConfigError("t1", "must satisfy T1 > 0");
    if (c.t2 && !(*c.t2 > 0 && std::isfinite(*c.t2))) throw ConfigError("t2", "must satisfy T2 > 0");
    if (c.tau && !(*c.tau > 0 && std::isfinite(*c.tau))) throw ConfigError("tau", "must satisfy tau > 0");
    if (c.p && !(*c.p >= 0 && *c.p <= 1)) throw ConfigError("p", "must satisfy 0 <= P <= 1");
    for (double q : c.p_list) {
        if (!(q >= 0 && q <= 1)) throw ConfigError("p_list", "entries must satisfy 0 <= P <= 1");
    }
    check_axis(c.grid_t1, "grid_t1", true);
    check_axis(c.grid_t2, "grid_t2", true);
    check_axis(c.grid_tau, "grid_tau", true);

    switch (c.command) {
        case Command::Cycle:
            require(c.t1, "t1");
            require(c.t2, "t2");
            exactly_one_of_tau_p(c);
            forbid(c.grid_t1.has_value(), "grid_t1", unused);
            forbid(c.grid_t2.has_value(), "grid_t2", unused);
            forbid(c.grid_tau.has_value(), "grid_tau", unused);
            forbid(!c.p_list.empty(), "p_list", unused);
            break;
        case Command::Sweep:
            exactly_one_of_tau_p(c);
            forbid(c.t1.has_value(), "t1", unused + " (temperatures come from grid_t1)");
            forbid(c.t2.has_value(), "t2", unused + " (temperatures come from grid_t2)");
            forbid(c.grid_tau.has_value(), "grid_tau", unused);
            forbid(!c.p_list.empty(), "p_list", unused);
            if (!c.grid_t1) c.grid_t1 = default_temperature_axis();
            if (!c.grid_t2) c.grid_t2 = default_temperature_axis();
            break;
        case Command::Adiabaticity:
            forbid(c.p.has_value(), "p", unused + " (P is the output)");
            forbid(!c.p_list.empty(), "p_list", unused);
            forbid(c.t1.has_value(), "t1", unused);
            forbid(c.t2.has_value(), "t2", unused);
            forbid(c.grid_t1.has_value(), "grid_t1", unused);
            forbid(c.grid_t2.has_value(), "grid_t2", unused);
            if (c.tau && c.grid_tau) throw ConfigError("grid_tau", "give either tau or grid_tau, not both");
            if (!c.tau && !c.grid_tau) throw ConfigError("grid_tau", "missing: give tau or grid_tau");
            break;
        case Command::Efficiency:
            exactly_one_of_tau_p(c);
            forbid(c.grid_tau.has_value(), "grid_tau", unused);
            if (c.grid_t1.has_value() == c.grid_t2.has_value()) {
                throw ConfigError("grid_t1", "give exactly one of grid_t1 (T1 hot) and grid_t2 (T2 hot)");
            }
            if (c.grid_t1) {
                require(c.t2, "t2");
                forbid(c.t1.has_value(), "t1", "conflicts with grid_t1");
            } else {
                require(c.t1, "t1");
                forbid(c.t2.has_value(), "t2", "conflicts with grid_t2");
            }
            break;
        case Command::Gap:
            exactly_one_of_tau_p(c);
            forbid(c.t1.has_value(), "t1", unused);
            forbid(c.t2.has_value(), "t2", unused);
            forbid(c.grid_tau.has_value(), "grid_tau", unused);
            if (!c.grid_t1) c.grid_t1 = default_temperature_axis();
            if (!c.grid_t2) c.grid_t2 = default_temperature_axis();
            break;
        case Command::Verify:
            break;
    }
}

ModelParams RunConfig::model() const {
    ModelParams m;
    m.jx = jx.value_or(0.0);
    m.jy = jy.value_or(0.0);
    m.h1 = h1.value_or(2.0);
    m.h2 = h2.value_or(1.0);
    m.t1 = t1.value_or(1.0);
    m.t2 = t2.value_or(1.0);
    m.tau = tau.value_or(1.0);
    return m;
}

nlohmann::ordered_json to_json(const RunConfig& c) {
    nlohmann::ordered_json j;
    j["command"] = to_string(c.command);
    auto put = [&](const char* k, const std::optional<double>& v) {
        if (v) j[k] = *v;
    };
    put("jx", c.jx);
    put("jy", c.jy);
    put("h1", c.h1);
    put("h2", c.h2);
    put("t1", c.t1);
    put("t2", c.t2);
    put("tau", c.tau);
    put("p", c.p);
    if (!c.p_list.empty()) j["p_list"] = c.p_list;
    j["schedule"] = to_string(c.schedule);
    auto axis = [&](const char* k, const std::optional<AxisSpec>& a) {
        if (a) j[k] = {{"min", a->min}, {"max", a->max}, {"count", a->count}, {"log", a->log}};
    };
    axis("grid_t1", c.grid_t1);
    axis("grid_t2", c.grid_t2);
    axis("grid_tau", c.grid_tau);
    j["out"] = c.out;
    j["format"] = to_string(c.format);
    j["seed"] = c.seed;
    j["workers"] = c.workers;
    j["wall_time"] = c.wall_time;
    return j;
}

}  // namespace xyotto
