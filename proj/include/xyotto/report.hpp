// report.hpp - Command execution and CSV / JSON emission

#pragma once

#include "xyotto/config.hpp"

#include <json.hpp>

#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

namespace xyotto {

inline constexpr const char* kToolName = "xyotto";
inline constexpr const char* kToolVersion = "1.0.0";

enum ExitCode : int {
    kExitOk = 0,
    kExitConfig = 2,
    kExitNumerical = 3,
    kExitVerify = 4,
};

// NaN doubles are written as "nan" in CSV and null in JSON.
using Cell = std::variant<double, long long, bool, std::string>;

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
    nlohmann::ordered_json metadata = nlohmann::ordered_json::object();
};

// Scientific notation with 12 significant digits.
std::string format_number(double v);

void write_csv(std::ostream& os, const Table& t, const nlohmann::ordered_json& header);
void write_json(std::ostream& os, const Table& t, const nlohmann::ordered_json& header);

// Runs the command and writes the artifact to cfg.out, or to `out` when cfg.out is empty.
// Progress and failures go to `diag`. Returns an ExitCode.
int execute(const RunConfig& cfg, std::ostream& out, std::ostream& diag);

}  // namespace xyotto
