#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "windline/expr.hpp"
#include "windline/grt.hpp"

namespace windline {

/// Parsed problem file: a cycle, an optional function with declared
/// singularities, query points and numeric overrides.
struct Problem {
    int version = 1;
    std::string source;  ///< file path or fixture name
    std::optional<std::string> function_text;
    std::optional<AnalyticFunction> function;
    Cycle cycle;
    std::vector<Complex> points;
    GrtConfig config;
    double detour_radius = 0.0;  ///< 0 selects the automatic choice
    nlohmann::json plot_curve;   ///< echo of the curve description for plot output
};

/// Command-line overrides applied on top of a file or fixture.
struct ProblemOverrides {
    std::optional<double> r;
    std::optional<double> alpha;
    std::optional<std::string> function;
    std::vector<Complex> singularities;
    std::vector<Complex> points;
    std::optional<double> tol_abs;
    std::optional<double> tol_rel;
};

inline const std::vector<std::string>& fixture_names() {
    static const std::vector<std::string> names = {"zeppelin", "sector", "semicircle", "sinc-sinh"};
    return names;
}

Complex parse_complex(const nlohmann::json& j, const std::string& what);

/// Builds a problem from a parsed JSON document (throws ParseError / Error).
Problem problem_from_json(const nlohmann::json& doc, const ProblemOverrides& overrides = {});

/// JSON text with error positions reported as line and column.
Problem problem_from_text(const std::string& text, const ProblemOverrides& overrides = {});

Problem fixture_problem(const std::string& name, const ProblemOverrides& overrides = {});

/// A fixture name or a path to a problem file.
Problem load_problem(const std::string& name_or_path, const ProblemOverrides& overrides = {});

}  // namespace windline
