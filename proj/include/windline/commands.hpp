#pragma once

#include <string>

#include <json.hpp>

#include "windline/error.hpp"
#include "windline/problem.hpp"

namespace windline {

enum ExitCode : int { kExitOk = 0, kExitParse = 2, kExitNumeric = 3, kExitConditions = 4 };

struct CommandOptions {
    std::string method = "all";  ///< winding: pv | bounded | geometric | all
    bool pv = false;             ///< integrate: principal value instead of a plain line integral
    double r = 20.0;             ///< improper: contour radius
    std::string emit_plot;       ///< optional CSV path for plot data
};

/// Result document plus the exit status it implies.
struct CommandResult {
    nlohmann::json record;
    int exit_code = kExitOk;
};

nlohmann::json to_json(Complex z);
nlohmann::json to_json(const PVResult& pv);
nlohmann::json error_json(const Error& e);
int exit_code_for(const Error& e);

CommandResult cmd_winding(const Problem& problem, const CommandOptions& opts);
CommandResult cmd_integrate(const Problem& problem, const CommandOptions& opts);
CommandResult cmd_residue(const Problem& problem, const CommandOptions& opts);
CommandResult cmd_verify(const Problem& problem, const CommandOptions& opts);
CommandResult cmd_improper(const CommandOptions& opts, const QuadratureConfig& cfg = {});

}  // namespace windline
