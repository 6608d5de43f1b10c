// config.hpp - Run configuration from a JSON file and command-line flags

#pragma once

#include "xyotto/analysis.hpp"
#include "xyotto/dynamics.hpp"

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace xyotto {

enum class Command { Cycle, Sweep, Adiabaticity, Efficiency, Gap, Verify };
enum class Format { Csv, Json };

std::string to_string(Command c);
std::string to_string(Format f);

struct RunConfig {
    Command command{Command::Cycle};
    std::optional<double> jx, jy, h1, h2, t1, t2;
    std::optional<double> tau;
    std::optional<double> p;
    std::vector<double> p_list;  // extra adiabaticities for efficiency and gap studies
    ScheduleKind schedule{ScheduleKind::SqrtLinear};
    std::optional<AxisSpec> grid_t1, grid_t2, grid_tau;
    std::string out;  // empty writes to stdout
    Format format{Format::Csv};
    std::uint64_t seed{1};
    unsigned workers{0};
    bool wall_time{false};

    // Model parameters with placeholders for fields the command does not use.
    ModelParams model() const;
};

// Thrown by parse_config for --help; carries the usage text.
struct HelpRequested {
    std::string text;
};

// "min:max:count[:log|:linear]".
AxisSpec parse_axis(const std::string& text, const std::string& field);

// Reads --config FILE first; flags override file values. Throws ConfigError naming the field.
RunConfig parse_config(const std::vector<std::string>& args);
RunConfig parse_config_json(const nlohmann::json& j);

// Fills defaults and checks the per-command requirements. Throws ConfigError.
void resolve(RunConfig& cfg);

nlohmann::ordered_json to_json(const RunConfig& cfg);

}  // namespace xyotto
