#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "windline/commands.hpp"

using namespace windline;
using nlohmann::json;

namespace {

Complex parse_point(const std::string& text) {
    std::istringstream in(text);
    double re = 0.0;
    double im = 0.0;
    char comma = ',';
    in >> re;
    if (!in) throw Error(ErrorCode::InvalidInput, "malformed point '" + text + "'; expected RE or RE,IM");
    if (in >> comma) {
        if (comma != ',' || !(in >> im)) throw Error(ErrorCode::InvalidInput, "malformed point '" + text + "'");
    }
    return {re, im};
}

int emit(const json& record, const std::string& json_path) {
    const std::string text = record.dump(2);
    std::cout << text << '\n';
    if (!json_path.empty()) {
        std::ofstream out(json_path);
        if (!out) {
            std::cerr << "cannot write " << json_path << '\n';
            return kExitParse;
        }
        out << text << '\n';
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Generalized winding numbers and residue theorem on curves through singularities"};
    app.require_subcommand(1);

    std::string problem_spec;
    std::string json_path;
    std::vector<std::string> point_args;
    std::vector<std::string> singularity_args;
    std::optional<double> r;
    std::optional<double> alpha;
    std::optional<double> tol_abs;
    std::optional<double> tol_rel;
    std::optional<std::string> function;
    bool timing = false;
    CommandOptions opts;

    auto common = [&](CLI::App* sub, bool needs_problem) {
        if (needs_problem) {
            sub->add_option("problem", problem_spec, "problem file or fixture (zeppelin, sector, semicircle, sinc-sinh)")
                ->required();
        }
        sub->add_option("--r", r, "contour radius for fixtures and the improper demo");
        sub->add_option("--alpha", alpha, "opening angle of the sector fixture");
        sub->add_option("--function", function, "override the function expression in z");
        sub->add_option("--singularity", singularity_args, "declared singularity RE,IM (repeatable)");
        sub->add_option("--point", point_args, "query point RE,IM (repeatable)");
        sub->add_option("--tol-abs", tol_abs, "absolute quadrature tolerance");
        sub->add_option("--tol-rel", tol_rel, "relative quadrature tolerance");
        sub->add_option("--emit-plot", opts.emit_plot, "write plot samples as CSV");
        sub->add_option("--json", json_path, "also write the result to this file");
        sub->add_flag("--timing", timing, "include wall-clock time in the result");
    };

    auto* winding = app.add_subcommand("winding", "winding number at the query points");
    common(winding, true);
    winding->add_option("--method", opts.method, "pv | bounded | geometric | all")
        ->check(CLI::IsMember({"pv", "bounded", "geometric", "all"}));
    auto* integrate = app.add_subcommand("integrate", "contour integral of the function");
    common(integrate, true);
    integrate->add_flag("--pv", opts.pv, "principal value with eps trace");
    auto* residue = app.add_subcommand("residue", "classify singularities and extract residues");
    common(residue, true);
    auto* verify = app.add_subcommand("verify", "check the generalized residue theorem");
    common(verify, true);
    auto* improper = app.add_subcommand("improper", "improper integral of sinc(t) sinh(t) / (cos t + cosh t)");
    common(improper, false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cout << json{{"error", {{"code", "UsageError"}, {"category", "parse"}, {"message", e.what()}}}}.dump(2)
                  << '\n';
        return kExitParse;
    }

    const auto start = std::chrono::steady_clock::now();
    try {
        ProblemOverrides ov;
        ov.r = r;
        ov.alpha = alpha;
        ov.function = function;
        ov.tol_abs = tol_abs;
        ov.tol_rel = tol_rel;
        for (const auto& s : point_args) ov.points.push_back(parse_point(s));
        for (const auto& s : singularity_args) ov.singularities.push_back(parse_point(s));

        CommandResult result;
        if (improper->parsed()) {
            opts.r = r.value_or(20.0);
            QuadratureConfig cfg;
            if (tol_abs) cfg.abs_tol = *tol_abs;
            if (tol_rel) cfg.rel_tol = *tol_rel;
            cfg.validate();
            result = cmd_improper(opts, cfg);
        } else {
            const Problem problem = load_problem(problem_spec, ov);
            if (winding->parsed()) result = cmd_winding(problem, opts);
            if (integrate->parsed()) result = cmd_integrate(problem, opts);
            if (residue->parsed()) result = cmd_residue(problem, opts);
            if (verify->parsed()) result = cmd_verify(problem, opts);
        }
        if (timing) {
            result.record["elapsed_seconds"] =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        }
        if (const int rc = emit(result.record, json_path)) return rc;
        return result.exit_code;
    } catch (const Error& e) {
        emit(error_json(e), json_path);
        return exit_code_for(e);
    } catch (const std::exception& e) {
        emit(json{{"error", {{"code", "Internal"}, {"category", "numeric"}, {"message", e.what()}}}}, json_path);
        return kExitNumeric;
    }
}
