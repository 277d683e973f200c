#include "windline/commands.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "windline/curves.hpp"

namespace windline {

using nlohmann::json;

json to_json(Complex z) { return json::array({z.real(), z.imag()}); }

json to_json(const PVResult& pv) {
    json j;
    j["status"] = std::string(to_string(pv.status));
    if (pv.status == PVStatus::Converged) j["value"] = to_json(pv.value);
    if (pv.status == PVStatus::Diverged) j["growth_exponent"] = pv.growth_exponent;
    j["noise_limited"] = pv.noise_limited;
    if (!pv.note.empty()) j["note"] = pv.note;
    json trace = json::array();
    for (const auto& p : pv.eps_trace) {
        trace.push_back({{"eps", p.eps}, {"value", to_json(p.value)}, {"noise", p.noise}});
    }
    j["eps_trace"] = std::move(trace);
    return j;
}

json error_json(const Error& e) {
    return {{"error",
             {{"code", std::string(to_string(e.code()))},
              {"category", category_of(e.code()) == ErrorCategory::Parse ? "parse" : "numeric"},
              {"message", e.what()}}}};
}

int exit_code_for(const Error& e) { return category_of(e.code()) == ErrorCategory::Parse ? kExitParse : kExitNumeric; }

namespace {

json hit_json(const Hit& h) {
    return {{"curve", h.curve_index},   {"segment", h.segment_index}, {"t", h.t_star},
            {"alpha", h.alpha},         {"at_breakpoint", h.at_breakpoint}, {"degenerate", h.degenerate}};
}

json base_record(const char* command, const Problem& p) {
    json j;
    j["command"] = command;
    j["version"] = 1;
    j["source"] = p.source;
    if (p.function_text) j["function"] = *p.function_text;
    return j;
}

const AnalyticFunction& require_function(const Problem& p) {
    if (!p.function) throw Error(ErrorCode::InvalidInput, "this command needs a function");
    return *p.function;
}

void write_curve_plot(const Problem& p, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error(ErrorCode::InvalidInput, "cannot write plot file '" + path + "'");
    out << "term,segment,t,x,y\n";
    char line[160];
    for (std::size_t c = 0; c < p.cycle.size(); ++c) {
        const auto& curve = p.cycle.terms()[c].curve;
        for (std::size_t k = 0; k < curve.size(); ++k) {
            const auto& seg = curve.segment(k);
            for (int j = 0; j <= 200; ++j) {
                const double t = seg.t0 + seg.length() * j / 200.0;
                const Complex z = seg.eval(t);
                std::snprintf(line, sizeof line, "%zu,%zu,%.17g,%.17g,%.17g\n", c, k, t, z.real(), z.imag());
                out << line;
            }
        }
    }
}

template <typename Fn>
json guarded(Fn&& fn, bool& failed) {
    try {
        return fn();
    } catch (const Error& e) {
        failed = true;
        return error_json(e);
    }
}

}  // namespace

CommandResult cmd_winding(const Problem& p, const CommandOptions& opts) {
    const auto& m = opts.method;
    if (m != "all" && m != "pv" && m != "bounded" && m != "geometric") {
        throw Error(ErrorCode::InvalidInput, "unknown winding method '" + m + "'");
    }
    if (p.points.empty()) throw Error(ErrorCode::InvalidInput, "no query points");
    const auto& cfg = p.config.quadrature;
    CommandResult res;
    res.record = base_record("winding", p);
    bool failed = false;
    json results = json::array();
    for (const auto& z0 : p.points) {
        json entry;
        entry["point"] = to_json(z0);
        const auto hits = find_hits(p.cycle, z0, cfg.geometry);
        entry["on_curve"] = !hits.empty();
        if (hits.empty()) {
            const long n = winding_off_curve(p.cycle, z0, cfg);
            entry["value"] = n;
            entry["method"] = "ClassicalInteger";
            entry["ray_crossings"] = ray_crossing_count(p.cycle, z0);
            results.push_back(std::move(entry));
            continue;
        }
        json hj = json::array();
        for (const auto& h : hits) hj.push_back(hit_json(h));
        entry["hits"] = std::move(hj);
        json methods = json::object();
        std::vector<double> values;
        if (m == "all" || m == "pv") {
            methods["pv"] = guarded(
                [&] {
                    auto w = winding_pv(p.cycle, z0, cfg);
                    values.push_back(w.value);
                    return json{{"value", w.value}, {"imaginary_residue", w.imaginary_residue}, {"trace", to_json(*w.pv)}};
                },
                failed);
        }
        if (m == "all" || m == "bounded") {
            methods["bounded"] = guarded(
                [&] {
                    auto w = winding_bounded(p.cycle, z0, cfg);
                    values.push_back(w.value);
                    json guards = json::array();
                    for (const auto& g : w.guard_values) guards.push_back({{"hit", g.hit_index}, {"before", g.before}, {"after", g.after}});
                    return json{{"value", w.value}, {"guard_values", guards}};
                },
                failed);
        }
        if (m == "all" || m == "geometric") {
            methods["geometric"] = guarded(
                [&] {
                    auto w = winding_geometric(p.cycle, z0, p.detour_radius, cfg);
                    values.push_back(w.value);
                    json j{{"value", w.value},
                           {"integer_part", w.integer_part_tilde},
                           {"angle_sum", w.angle_sum},
                           {"delta", w.delta}};
                    if (!w.warnings.empty()) j["warnings"] = w.warnings;
                    return j;
                },
                failed);
        }
        double spread = 0.0;
        for (double a : values) {
            for (double b : values) spread = std::max(spread, std::abs(a - b));
        }
        entry["methods"] = std::move(methods);
        entry["max_method_delta"] = spread;
        results.push_back(std::move(entry));
    }
    res.record["results"] = std::move(results);
    if (!opts.emit_plot.empty()) write_curve_plot(p, opts.emit_plot);
    res.record["status"] = failed ? "error" : "ok";
    res.exit_code = failed ? kExitNumeric : kExitOk;
    return res;
}

CommandResult cmd_integrate(const Problem& p, const CommandOptions& opts) {
    const auto& f = require_function(p);
    CommandResult res;
    res.record = base_record("integrate", p);
    if (opts.pv) {
        auto pv = pv_integral(f, p.cycle, p.config.quadrature);
        res.record["pv"] = to_json(pv);
        if (pv.status != PVStatus::Converged) {
            res.record["status"] = std::string(to_string(pv.status));
            res.exit_code = pv.status == PVStatus::Diverged ? kExitOk : kExitNumeric;
        } else {
            res.record["value"] = to_json(pv.value);
            res.record["status"] = "ok";
        }
    } else {
        res.record["value"] = to_json(line_integral(f, p.cycle, p.config.quadrature));
        res.record["status"] = "ok";
    }
    if (!opts.emit_plot.empty()) write_curve_plot(p, opts.emit_plot);
    return res;
}

CommandResult cmd_residue(const Problem& p, const CommandOptions&) {
    const auto& f = require_function(p);
    std::vector<Complex> where;
    for (const auto& s : f.singularities) where.push_back(s.location);
    if (where.empty()) where = p.points;
    if (where.empty()) throw Error(ErrorCode::InvalidInput, "no singularities or points to examine");
    CommandResult res;
    res.record = base_record("residue", p);
    json out = json::array();
    for (const auto& z0 : where) {
        const auto s = classify(f, z0, p.config.laurent);
        json principal = json::array();
        for (int n : s.principal_indices(p.config.laurent.zero_threshold)) principal.push_back(n);
        out.push_back({{"location", to_json(z0)},
                       {"kind", std::string(to_string(s.kind))},
                       {"order", s.order},
                       {"residue", to_json(s.residue.value_or(Complex{}))},
                       {"radius", s.radius},
                       {"principal_indices", principal}});
    }
    res.record["results"] = std::move(out);
    res.record["status"] = "ok";
    return res;
}

CommandResult cmd_verify(const Problem& p, const CommandOptions& opts) {
    const auto& f = require_function(p);
    GrtConfig cfg = p.config;
    const auto report = evaluate(f, p.cycle, cfg);
    CommandResult res;
    res.record = base_record("verify", p);
    json per = json::array();
    for (const auto& s : report.per_singularity) {
        json j{{"location", to_json(s.singularity.location)},
               {"kind", std::string(to_string(s.singularity.kind))},
               {"order", s.singularity.order},
               {"residue", to_json(s.singularity.residue.value_or(Complex{}))},
               {"winding", s.winding},
               {"on_cycle", s.on_cycle}};
        if (s.on_cycle) {
            j["condition_a"] = {{"ok", s.cond_a.ok},
                                {"exponent", std::isfinite(s.cond_a.exponent) ? json(s.cond_a.exponent) : json("inf")}};
            json b = json::array();
            for (const auto& c : s.cond_b) {
                b.push_back({{"ok", c.ok}, {"p", c.angle.p}, {"q", c.angle.q}, {"admissible", c.admissible},
                             {"offending", c.offending}});
            }
            j["condition_b"] = std::move(b);
        }
        if (!s.note.empty()) j["note"] = s.note;
        per.push_back(std::move(j));
    }
    res.record["per_singularity"] = std::move(per);
    res.record["lhs"] = to_json(report.lhs);
    res.record["rhs"] = to_json(report.rhs);
    res.record["verdict"] = std::string(to_string(report.verdict));
    res.record["discrepancy"] = report.discrepancy;
    res.record["tolerance"] = report.tolerance;
    if (!report.reason.empty()) res.record["reason"] = report.reason;
    switch (report.verdict) {
        case Verdict::Verified: res.exit_code = kExitOk; break;
        case Verdict::ConditionsFailed: res.exit_code = kExitConditions; break;
        default: res.exit_code = kExitNumeric; break;
    }
    res.record["status"] = res.exit_code == kExitOk ? "ok" : "failed";
    if (!opts.emit_plot.empty()) write_curve_plot(p, opts.emit_plot);
    return res;
}

CommandResult cmd_improper(const CommandOptions& opts, const QuadratureConfig& cfg) {
    const auto d = improper_integral_demo(opts.r, cfg);
    CommandResult res;
    res.record["command"] = "improper";
    res.record["version"] = 1;
    res.record["r"] = d.r;
    res.record["estimate"] = d.estimate;
    res.record["reference"] = kPi / 4.0;
    res.record["error_bound"] = d.bound;
    res.record["within_bound"] = std::abs(d.estimate - kPi / 4.0) <= d.bound;
    res.record["im_legs"] = json::array({d.im_leg1, d.im_leg2, d.im_leg3});
    res.record["im_cycle"] = d.im_cycle;
    res.record["identity_error"] = std::abs(d.im_cycle + kPi / 2.0);
    res.record["identity_holds"] = d.identity_holds;
    res.exit_code = d.identity_holds ? kExitOk : kExitNumeric;
    res.record["status"] = d.identity_holds ? "ok" : "failed";
    if (!opts.emit_plot.empty()) {
        std::ofstream out(opts.emit_plot);
        if (!out) throw Error(ErrorCode::InvalidInput, "cannot write plot file '" + opts.emit_plot + "'");
        out << "t,integrand\n";
        const auto f = sinc_sinh_function(0.0);
        const Complex up{1.0, 1.0};
        char line[96];
        for (int j = 1; j <= 2000; ++j) {
            const double t = opts.r * j / 2000.0;
            const double g = std::imag(f(t * up) * up);
            std::snprintf(line, sizeof line, "%.17g,%.17g\n", t, g);
            out << line;
        }
        res.record["plot"] = opts.emit_plot;
    }
    return res;
}

}  // namespace windline
