#include "windline/problem.hpp"

#include <fstream>
#include <sstream>

#include "windline/curves.hpp"
#include "windline/error.hpp"

namespace windline {

using nlohmann::json;

namespace {

[[noreturn]] void invalid(const std::string& msg) { throw Error(ErrorCode::InvalidInput, msg); }

double number_field(const json& j, const char* key, const std::string& where) {
    if (!j.contains(key)) invalid(where + ": missing field '" + key + "'");
    if (!j.at(key).is_number()) invalid(where + ": field '" + key + "' must be a number");
    return j.at(key).get<double>();
}

double number_or(const json& j, const char* key, double fallback, const std::string& where) {
    return j.contains(key) ? number_field(j, key, where) : fallback;
}

std::string string_field(const json& j, const char* key, const std::string& where) {
    if (!j.contains(key) || !j.at(key).is_string()) invalid(where + ": field '" + key + "' must be a string");
    return j.at(key).get<std::string>();
}

Expr parse_in(const std::string& text, const char* var, const std::string& where) {
    try {
        return parse(text, var);
    } catch (const ParseError& e) {
        throw ParseError(e.code(), where + ": " + e.detail(), e.position());
    }
}

Segment piece_from_json(const json& p, const std::string& where) {
    const std::string type = string_field(p, "type", where);
    if (type == "line") return curves::line(parse_complex(p.at("from"), where + ".from"), parse_complex(p.at("to"), where + ".to"));
    if (type == "arc") {
        const double radius = number_field(p, "radius", where);
        if (!(radius > 0.0)) invalid(where + ": radius must be positive");
        return curves::arc(parse_complex(p.value("center", json::array({0.0, 0.0})), where + ".center"), radius,
                           number_field(p, "theta0", where), number_field(p, "theta1", where));
    }
    if (type == "expr") {
        const double t0 = number_field(p, "t0", where);
        const double t1 = number_field(p, "t1", where);
        if (p.contains("z")) return segment_from_expr(parse_in(string_field(p, "z", where), "t", where), Expr(), t0, t1);
        return segment_from_expr(parse_in(string_field(p, "x", where), "t", where),
                                 parse_in(string_field(p, "y", where), "t", where), t0, t1);
    }
    invalid(where + ": unknown piece type '" + type + "'");
}

ClosedCurve curve_from_json(const json& c, const std::string& where) {
    const std::string type = string_field(c, "type", where);
    if (type == "circle") {
        const double radius = number_field(c, "radius", where);
        if (!(radius > 0.0)) invalid(where + ": radius must be positive");
        return curves::circle(parse_complex(c.value("center", json::array({0.0, 0.0})), where + ".center"), radius,
                              c.value("counterclockwise", true));
    }
    if (type == "polygon") {
        std::vector<Complex> v;
        for (const auto& p : c.at("vertices")) v.push_back(parse_complex(p, where + ".vertices"));
        if (v.size() < 3) invalid(where + ": a polygon needs at least three vertices");
        return curves::polygon(v);
    }
    if (type == "sector") {
        const double r = number_field(c, "r", where);
        const double alpha = number_field(c, "alpha", where);
        if (!(r > 0.0)) invalid(where + ": r must be positive");
        if (!(alpha > 0.0 && alpha <= kTwoPi)) invalid(where + ": alpha must lie in (0, 2pi]");
        return curves::model_sector(r, alpha);
    }
    if (type == "quarter") {
        const double r = number_field(c, "r", where);
        if (!(r > 0.0)) invalid(where + ": r must be positive");
        return curves::quarter_contour(r);
    }
    if (type == "semicircle") {
        const double radius = number_field(c, "radius", where);
        if (!(radius > 0.0)) invalid(where + ": radius must be positive");
        return curves::semicircle(radius, parse_complex(c.value("center", json::array({0.0, 0.0})), where + ".center"));
    }
    if (type == "zeppelin") return curves::zeppelin();
    if (type == "pieces") {
        std::vector<Segment> segs;
        std::size_t k = 0;
        for (const auto& p : c.at("pieces")) segs.push_back(piece_from_json(p, where + ".pieces[" + std::to_string(k++) + "]"));
        if (segs.empty()) invalid(where + ": no pieces");
        return ClosedCurve(std::move(segs));
    }
    invalid(where + ": unknown curve type '" + type + "'");
}

Singularity singularity_from_json(const json& s, const std::string& where) {
    Singularity out;
    out.location = parse_complex(s.at("location"), where + ".location");
    if (s.contains("order")) {
        out.order = static_cast<int>(number_field(s, "order", where));
        if (out.order < 0) invalid(where + ": order must be non-negative");
        out.kind = out.order == 0 ? SingularityKind::Removable : SingularityKind::Pole;
    }
    if (s.contains("kind")) {
        const std::string kind = string_field(s, "kind", where);
        if (kind == "pole") {
            out.kind = SingularityKind::Pole;
        } else if (kind == "essential") {
            out.kind = SingularityKind::EssentialTruncated;
        } else if (kind == "removable") {
            out.kind = SingularityKind::Removable;
        } else {
            invalid(where + ": unknown singularity kind '" + kind + "'");
        }
    }
    if (s.contains("residue")) out.residue = parse_complex(s.at("residue"), where + ".residue");
    return out;
}

AnalyticFunction function_from_text(const std::string& text, std::vector<Singularity> singularities) {
    AnalyticFunction f;
    f.label = text;
    f.eval = function_from_expr(parse_in(text, "z", "function"));
    f.singularities = std::move(singularities);
    return f;
}

Singularity declared_at(Complex z) {
    Singularity s;
    s.location = z;
    return s;
}

void apply_overrides(Problem& p, const ProblemOverrides& o) {
    if (o.function) {
        std::vector<Singularity> sing;
        if (!o.singularities.empty()) {
            for (auto z : o.singularities) sing.push_back(declared_at(z));
        } else if (p.function) {
            for (const auto& s : p.function->singularities) sing.push_back(declared_at(s.location));
        }
        p.function = function_from_text(*o.function, std::move(sing));
        p.function_text = o.function;
    } else if (!o.singularities.empty()) {
        if (!p.function) invalid("singularities given without a function");
        p.function->singularities.clear();
        for (auto z : o.singularities) p.function->singularities.push_back(declared_at(z));
    }
    if (!o.points.empty()) p.points = o.points;
    if (o.tol_abs) p.config.quadrature.abs_tol = *o.tol_abs;
    if (o.tol_rel) p.config.quadrature.rel_tol = *o.tol_rel;
    p.config.quadrature.validate();
}

void apply_config(Problem& p, const json& c) {
    auto& q = p.config.quadrature;
    const std::string where = "config";
    q.abs_tol = number_or(c, "abs_tol", q.abs_tol, where);
    q.rel_tol = number_or(c, "rel_tol", q.rel_tol, where);
    q.eps0 = number_or(c, "eps0", q.eps0, where);
    q.eps_ratio = number_or(c, "eps_ratio", q.eps_ratio, where);
    q.eps_steps = static_cast<int>(number_or(c, "eps_steps", q.eps_steps, where));
    q.pv_tol = number_or(c, "pv_tol", q.pv_tol, where);
    q.max_subdivisions = static_cast<std::size_t>(number_or(c, "max_subdivisions", static_cast<double>(q.max_subdivisions), where));
    q.geometry.hit_tol = number_or(c, "hit_tol", q.geometry.hit_tol, where);
    p.config.verify_tol = number_or(c, "verify_tol", p.config.verify_tol, where);
    p.detour_radius = number_or(c, "delta", p.detour_radius, where);
    if (c.contains("exterior_probes")) {
        for (const auto& z : c.at("exterior_probes")) p.config.exterior_probes.push_back(parse_complex(z, "config.exterior_probes"));
    }
    if (!(q.eps_ratio > 0.0 && q.eps_ratio < 1.0)) invalid("config: eps_ratio must lie in (0, 1)");
    if (q.eps_steps < 1) invalid("config: eps_steps must be positive");
}

std::string line_col(const std::string& text, std::size_t byte) {
    std::size_t line = 1;
    std::size_t col = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

}  // namespace

Complex parse_complex(const json& j, const std::string& what) {
    if (j.is_number()) return {j.get<double>(), 0.0};
    if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) return {j[0].get<double>(), j[1].get<double>()};
    invalid(what + ": expected a number or an [re, im] pair");
}

Problem problem_from_json(const json& doc, const ProblemOverrides& overrides) {
    try {
        if (!doc.is_object()) invalid("problem file must be a JSON object");
        Problem p;
        p.version = static_cast<int>(number_field(doc, "version", "problem"));
        if (p.version != 1) invalid("unsupported problem version " + std::to_string(p.version));
        if (doc.contains("function")) {
            const auto& f = doc.at("function");
            std::vector<Singularity> sing;
            std::size_t k = 0;
            for (const auto& s : f.value("singularities", json::array())) {
                sing.push_back(singularity_from_json(s, "function.singularities[" + std::to_string(k++) + "]"));
            }
            p.function_text = string_field(f, "expr", "function");
            p.function = function_from_text(*p.function_text, std::move(sing));
        }
        if (!doc.contains("cycle") || !doc.at("cycle").is_array() || doc.at("cycle").empty()) {
            invalid("problem: 'cycle' must be a nonempty list");
        }
        std::size_t k = 0;
        for (const auto& term : doc.at("cycle")) {
            const std::string where = "cycle[" + std::to_string(k++) + "]";
            const int m = static_cast<int>(number_or(term, "multiplicity", 1.0, where));
            if (m == 0) invalid(where + ": multiplicity must be nonzero");
            p.cycle.add(curve_from_json(term.at("curve"), where + ".curve"), m);
        }
        p.plot_curve = doc.at("cycle");
        for (const auto& z : doc.value("points", json::array())) p.points.push_back(parse_complex(z, "points"));
        if (doc.contains("config")) apply_config(p, doc.at("config"));
        apply_overrides(p, overrides);
        validate_immersion(p.cycle, p.config.quadrature.geometry);
        return p;
    } catch (const json::exception& e) {
        throw Error(ErrorCode::InvalidInput, std::string("malformed problem: ") + e.what());
    }
}

Problem problem_from_text(const std::string& text, const ProblemOverrides& overrides) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(ErrorCode::SyntaxError, "invalid JSON (" + line_col(text, e.byte) + ")", e.byte);
    }
    return problem_from_json(doc, overrides);
}

Problem fixture_problem(const std::string& name, const ProblemOverrides& overrides) {
    Problem p;
    p.source = name;
    auto pole_at_zero = [] {
        Singularity s;
        s.location = 0.0;
        s.kind = SingularityKind::Pole;
        s.order = 1;
        s.residue = Complex(1.0, 0.0);
        return s;
    };
    auto reciprocal = [&] {
        p.function_text = "1/z";
        p.function = function_from_text("1/z", {pole_at_zero()});
    };
    if (name == "zeppelin") {
        p.cycle = Cycle(curves::zeppelin());
        p.points = {0.0, -0.1, 0.1};
        p.plot_curve = json::array({{{"multiplicity", 1}, {"curve", {{"type", "zeppelin"}}}}});
        reciprocal();
    } else if (name == "sector") {
        const double r = overrides.r.value_or(1.0);
        const double alpha = overrides.alpha.value_or(kPi / 2.0);
        if (!(r > 0.0)) invalid("sector: r must be positive");
        if (!(alpha > 0.0 && alpha <= kTwoPi)) invalid("sector: alpha must lie in (0, 2pi]");
        p.cycle = Cycle(curves::model_sector(r, alpha));
        p.points = {0.0};
        p.plot_curve = json::array({{{"multiplicity", 1}, {"curve", {{"type", "sector"}, {"r", r}, {"alpha", alpha}}}}});
        reciprocal();
    } else if (name == "semicircle") {
        const double r = overrides.r.value_or(1.0);
        if (!(r > 0.0)) invalid("semicircle: radius must be positive");
        p.cycle = Cycle(curves::semicircle(r));
        p.points = {0.0};
        p.plot_curve = json::array({{{"multiplicity", 1}, {"curve", {{"type", "semicircle"}, {"radius", r}}}}});
        reciprocal();
    } else if (name == "sinc-sinh") {
        const double r = overrides.r.value_or(20.0);
        if (!(r > 0.0)) invalid("sinc-sinh: r must be positive");
        p.cycle = Cycle(curves::quarter_contour(r));
        p.points = {0.0};
        p.plot_curve = json::array({{{"multiplicity", 1}, {"curve", {{"type", "quarter"}, {"r", r}}}}});
        p.function = sinc_sinh_function(2.0 * r);
        p.function_text = p.function->label;
    } else {
        invalid("unknown fixture '" + name + "'");
    }
    apply_overrides(p, overrides);
    return p;
}

Problem load_problem(const std::string& name_or_path, const ProblemOverrides& overrides) {
    for (const auto& n : fixture_names()) {
        if (name_or_path == n) return fixture_problem(name_or_path, overrides);
    }
    std::ifstream in(name_or_path);
    if (!in) invalid("cannot open problem file '" + name_or_path + "' (and it is not a fixture name)");
    std::ostringstream buf;
    buf << in.rdbuf();
    Problem p = problem_from_text(buf.str(), overrides);
    p.source = name_or_path;
    return p;
}

}  // namespace windline
