#include "windline/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "windline/error.hpp"

namespace windline {

namespace {

constexpr std::size_t kScaleSamples = 257;
constexpr double kEps = std::numeric_limits<double>::epsilon();

double sample_param(const Segment& seg, std::size_t i, std::size_t n) {
    if (i == n) return seg.t1;
    return seg.t0 + seg.length() * static_cast<double>(i) / static_cast<double>(n);
}

double least_squares_slope(const std::vector<double>& x, const std::vector<double>& y) {
    const double n = static_cast<double>(x.size());
    const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
    const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
    double sxy = 0.0;
    double sxx = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
    }
    return sxy / sxx;
}

}  // namespace

std::string_view to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::InvalidInput: return "InvalidInput";
        case ErrorCode::NonImmersion: return "NonImmersion";
        case ErrorCode::TooManyHits: return "TooManyHits";
        case ErrorCode::MissingSecondDerivative: return "MissingSecondDerivative";
        case ErrorCode::InsufficientSamples: return "InsufficientSamples";
        case ErrorCode::SingularityOnPath: return "SingularityOnPath";
        case ErrorCode::NoConvergence: return "NoConvergence";
        case ErrorCode::OverlappingExclusions: return "OverlappingExclusions";
        case ErrorCode::WindowEscape: return "WindowEscape";
        case ErrorCode::PointOnCurve: return "PointOnCurve";
        case ErrorCode::OracleMismatch: return "OracleMismatch";
        case ErrorCode::NotC11NearHit: return "NotC11NearHit";
        case ErrorCode::DetourOverlap: return "DetourOverlap";
        case ErrorCode::AnnulusViolation: return "AnnulusViolation";
        case ErrorCode::IrrationalAngle: return "IrrationalAngle";
        case ErrorCode::SyntaxError: return "SyntaxError";
        case ErrorCode::UnknownFunction: return "UnknownFunction";
        case ErrorCode::NonHolomorphic: return "NonHolomorphic";
        case ErrorCode::NonDifferentiable: return "NonDifferentiable";
    }
    return "Unknown";
}

ErrorCategory category_of(ErrorCode code) {
    switch (code) {
        case ErrorCode::InvalidInput:
        case ErrorCode::SyntaxError:
        case ErrorCode::UnknownFunction:
        case ErrorCode::NonHolomorphic:
            return ErrorCategory::Parse;
        default:
            return ErrorCategory::Numeric;
    }
}

// --- ClosedCurve / Cycle ------------------------------------------------------

double ClosedCurve::scale() const {
    double m = 0.0;
    for (const auto& seg : segments_) {
        for (std::size_t i = 0; i < kScaleSamples; ++i) {
            m = std::max(m, std::abs(seg.eval(sample_param(seg, i, kScaleSamples - 1))));
        }
    }
    return m > 0.0 ? m : 1.0;
}

CurveLocation ClosedCurve::locate(double s) const {
    const double n = static_cast<double>(segments_.size());
    double w = std::fmod(s, n);
    if (w < 0.0) w += n;
    if (w >= n) w = 0.0;
    auto k = static_cast<std::size_t>(std::floor(w));
    if (k >= segments_.size()) k = segments_.size() - 1;
    const double u = w - static_cast<double>(k);
    const auto& seg = segments_[k];
    return {k, seg.t0 + u * seg.length()};
}

double ClosedCurve::global(std::size_t segment, double t) const {
    const auto& seg = segments_.at(segment);
    return static_cast<double>(segment) + (t - seg.t0) / seg.length();
}

Complex ClosedCurve::eval_global(double s) const {
    const auto loc = locate(s);
    return segments_[loc.segment].eval(loc.t);
}

Complex ClosedCurve::deriv_global(double s) const {
    const auto loc = locate(s);
    const auto& seg = segments_[loc.segment];
    return seg.deriv(loc.t) * seg.length();
}

double Cycle::scale() const {
    double m = 0.0;
    for (const auto& term : terms_) m = std::max(m, term.curve.scale());
    return m > 0.0 ? m : 1.0;
}

// --- immersion ----------------------------------------------------------------

ImmersionReport inspect_immersion(const Cycle& cycle, const GeometryConfig& cfg) {
    ImmersionReport report;
    report.min_speed = std::numeric_limits<double>::infinity();
    if (cycle.size() == 0) {
        report.ok = false;
        report.problems.emplace_back("cycle has no curves");
        return report;
    }
    const double scale = cycle.scale();
    const std::size_t n = std::max<std::size_t>(cfg.immersion_samples, 2) - 1;

    for (std::size_t c = 0; c < cycle.size(); ++c) {
        const auto& term = cycle.terms()[c];
        const auto& curve = term.curve;
        const std::string where = "curve " + std::to_string(c);
        if (term.multiplicity == 0) report.problems.push_back(where + ": zero multiplicity");
        if (curve.size() == 0) {
            report.problems.push_back(where + ": no segments");
            continue;
        }
        for (std::size_t k = 0; k < curve.size(); ++k) {
            const auto& seg = curve.segment(k);
            const std::string here = where + " segment " + std::to_string(k);
            if (!(seg.t0 < seg.t1)) {
                report.problems.push_back(here + ": empty parameter range");
                continue;
            }
            double max_speed = 0.0;
            std::vector<Complex> pts(n + 1);
            for (std::size_t i = 0; i <= n; ++i) {
                const double t = sample_param(seg, i, n);
                pts[i] = seg.eval(t);
                const double speed = std::abs(seg.deriv(t));
                if (!std::isfinite(pts[i].real()) || !std::isfinite(pts[i].imag()) || !std::isfinite(speed)) {
                    report.problems.push_back(here + ": non-finite sample");
                    break;
                }
                max_speed = std::max(max_speed, speed);
                if (speed < report.min_speed) {
                    report.min_speed = speed;
                    report.curve_index = c;
                    report.segment_index = k;
                    report.t_at_min = t;
                }
            }
            const double dt = seg.length() / static_cast<double>(n);
            for (std::size_t i = 0; i < n; ++i) {
                if (std::abs(pts[i + 1] - pts[i]) > 2.0 * max_speed * dt + cfg.join_tol * scale) {
                    report.problems.push_back(here + ": jump exceeds the Lipschitz bound near t=" +
                                              std::to_string(sample_param(seg, i, n)));
                    break;
                }
            }
            const auto& next = curve.segment((k + 1) % curve.size());
            if (std::abs(seg.eval(seg.t1) - next.eval(next.t0)) > cfg.join_tol * scale) {
                report.problems.push_back(here + (k + 1 == curve.size() ? ": curve does not close"
                                                                        : ": gap to the next segment"));
            }
        }
    }
    if (report.min_speed < cfg.immersion_tol * scale) {
        report.problems.push_back("derivative vanishes near t=" + std::to_string(report.t_at_min) + " (curve " +
                                  std::to_string(report.curve_index) + " segment " +
                                  std::to_string(report.segment_index) + ")");
    }
    report.ok = report.problems.empty();
    return report;
}

ImmersionReport validate_immersion(const Cycle& cycle, const GeometryConfig& cfg) {
    auto report = inspect_immersion(cycle, cfg);
    if (!report.ok) {
        const bool speed = report.min_speed < cfg.immersion_tol * cycle.scale();
        throw Error(speed ? ErrorCode::NonImmersion : ErrorCode::InvalidInput, report.problems.front());
    }
    return report;
}

// --- hits -----------------------------------------------------------------------

double corner_angle(Complex tangent_in, Complex tangent_out) {
    double a = std::arg(tangent_in / tangent_out);
    if (a < 0.0) a += kTwoPi;
    if (a >= kTwoPi) a = 0.0;
    return a;
}

double corner_angle(const Hit& hit) { return corner_angle(hit.tangent_in, hit.tangent_out); }

namespace {

double refine_hit(const Segment& seg, Complex z0, double t, double lo, double hi) {
    double best_t = t;
    double best_d = std::abs(seg.eval(t) - z0);
    for (int iter = 0; iter < 60; ++iter) {
        const Complex r = seg.eval(t) - z0;
        const Complex v = seg.deriv(t);
        const double speed2 = std::norm(v);
        if (speed2 == 0.0) break;
        const double next = std::clamp(t - (std::conj(v) * r).real() / speed2, lo, hi);
        const double d = std::abs(seg.eval(next) - z0);
        if (d < best_d) {
            best_d = d;
            best_t = next;
        }
        if (std::abs(next - t) <= 4.0 * kEps * (1.0 + std::abs(t))) break;
        t = next;
    }
    return best_t;
}

Hit make_hit(const ClosedCurve& curve, std::size_t c, std::size_t k, double t, Complex z0) {
    const auto& seg = curve.segment(k);
    Hit hit;
    hit.curve_index = c;
    hit.segment_index = k;
    hit.t_star = t;
    hit.position = curve.global(k, t);
    hit.point = z0;
    hit.at_breakpoint = (t == seg.t0);
    const Complex v = seg.deriv(t);
    if (std::abs(v) == 0.0) throw Error(ErrorCode::NonImmersion, "zero velocity at a hit");
    hit.tangent_out = v / std::abs(v);
    if (hit.at_breakpoint) {
        const auto& prev = curve.segment((k + curve.size() - 1) % curve.size());
        const Complex w = prev.deriv(prev.t1);
        if (std::abs(w) == 0.0) throw Error(ErrorCode::NonImmersion, "zero velocity at a hit");
        hit.tangent_in = -w / std::abs(w);
    } else {
        hit.tangent_in = -hit.tangent_out;
    }
    hit.alpha = corner_angle(hit);
    hit.degenerate = hit.alpha < 1e-6 || hit.alpha > kTwoPi - 1e-6;
    return hit;
}

}  // namespace

std::vector<Hit> find_hits(const Cycle& cycle, Complex z0, double tol, const GeometryConfig& cfg) {
    if (!(tol > 0.0)) throw Error(ErrorCode::InvalidInput, "hit tolerance must be positive");
    const double accept = tol * cycle.scale();
    const std::size_t m = std::max<std::size_t>(cfg.grid_points, 4);
    std::vector<Hit> hits;

    for (std::size_t c = 0; c < cycle.size(); ++c) {
        const auto& curve = cycle.terms()[c].curve;
        const std::size_t nseg = curve.size();
        std::vector<std::pair<std::size_t, double>> raw;

        for (std::size_t k = 0; k < nseg; ++k) {
            const auto& seg = curve.segment(k);
            std::vector<double> d(m + 1);
            std::size_t run = 0;
            for (std::size_t i = 0; i <= m; ++i) {
                d[i] = std::abs(seg.eval(sample_param(seg, i, m)) - z0);
                run = d[i] <= accept ? run + 1 : 0;
                if (run >= 3) {
                    throw Error(ErrorCode::NonImmersion, "curve " + std::to_string(c) + " segment " +
                                                             std::to_string(k) +
                                                             " is stationary at the query point");
                }
            }
            constexpr double inf = std::numeric_limits<double>::infinity();
            for (std::size_t i = 0; i <= m; ++i) {
                const double left = i > 0 ? d[i - 1] : inf;
                const double right = i < m ? d[i + 1] : inf;
                if (!(d[i] <= left && d[i] <= right) || (d[i] == left && d[i] == right)) continue;
                const double lo = sample_param(seg, i > 0 ? i - 1 : 0, m);
                const double hi = sample_param(seg, i < m ? i + 1 : m, m);
                double t = refine_hit(seg, z0, sample_param(seg, i, m), lo, hi);
                if (std::abs(seg.eval(t) - z0) > accept) continue;

                const double len = seg.length();
                if (t - seg.t0 <= 1e-9 * len && std::abs(seg.eval(seg.t0) - z0) <= accept) t = seg.t0;
                if (seg.t1 - t <= 1e-9 * len && std::abs(seg.eval(seg.t1) - z0) <= accept) {
                    const std::size_t next = (k + 1) % nseg;
                    raw.emplace_back(next, curve.segment(next).t0);
                } else {
                    raw.emplace_back(k, t);
                }
            }
        }

        std::sort(raw.begin(), raw.end());
        std::vector<std::pair<std::size_t, double>> unique;
        for (const auto& r : raw) {
            if (!unique.empty() && unique.back().first == r.first &&
                std::abs(unique.back().second - r.second) <= 1e-8 * curve.segment(r.first).length()) {
                continue;
            }
            unique.push_back(r);
        }
        for (const auto& [k, t] : unique) {
            hits.push_back(make_hit(curve, c, k, t, z0));
            if (hits.size() > cfg.max_hits) {
                throw Error(ErrorCode::TooManyHits,
                            "more than " + std::to_string(cfg.max_hits) + " hits of the query point");
            }
        }
    }
    return hits;
}

// --- curvature ------------------------------------------------------------------

Complex second_derivative(const Segment& seg, double t, bool allow_fd) {
    if (seg.deriv2) return (*seg.deriv2)(t);
    if (!allow_fd) throw Error(ErrorCode::MissingSecondDerivative, "segment has no second derivative");
    const double h = std::cbrt(kEps) * (1.0 + std::abs(t));
    if (t - h >= seg.t0 && t + h <= seg.t1) return (seg.deriv(t + h) - seg.deriv(t - h)) / (2.0 * h);
    if (t + 2.0 * h <= seg.t1)
        return (-3.0 * seg.deriv(t) + 4.0 * seg.deriv(t + h) - seg.deriv(t + 2.0 * h)) / (2.0 * h);
    return (3.0 * seg.deriv(t) - 4.0 * seg.deriv(t - h) + seg.deriv(t - 2.0 * h)) / (2.0 * h);
}

double signed_curvature(const Segment& seg, double t, bool allow_fd) {
    const Complex v = seg.deriv(t);
    const double speed = std::abs(v);
    if (speed == 0.0) throw Error(ErrorCode::NonImmersion, "zero velocity in curvature evaluation");
    const Complex a = second_derivative(seg, t, allow_fd);
    return (std::conj(v) * a).imag() / (speed * speed * speed);
}

double signed_curvature(const ClosedCurve& curve, std::size_t segment, double t, bool allow_fd) {
    return signed_curvature(curve.segment(segment), t, allow_fd);
}

double signed_curvature(const ClosedCurve& curve, double t, bool allow_fd) {
    for (const auto& seg : curve.segments()) {
        if (t >= seg.t0 && t <= seg.t1) return signed_curvature(seg, t, allow_fd);
    }
    throw Error(ErrorCode::InvalidInput, "parameter outside every segment");
}

// --- flatness -------------------------------------------------------------------

namespace {

// Fitted exponent s in d ~ r^s for samples walking away from the hit along one side.
double one_sided_flatness(const Segment& seg, double t_start, double direction, double available, Complex z1,
                          Complex tangent) {
    if (!(available > 0.0)) throw Error(ErrorCode::InsufficientSamples, "no room for one-sided sampling");
    constexpr int kLevels = 12;
    const double h0 = std::min(1e-2 * seg.length(), 0.5 * available);
    std::vector<double> log_r;
    std::vector<double> log_d;
    for (int j = 0; j < kLevels; ++j) {
        const double h = h0 * std::ldexp(1.0, -j);
        const Complex p = seg.eval(t_start + direction * h) - z1;
        const double r = std::abs(p);
        const double d = std::abs((std::conj(tangent) * p).imag());
        const double floor = 64.0 * kEps * std::max(std::abs(z1), std::abs(p + z1));
        if (r > 0.0 && d > floor) {
            log_r.push_back(std::log(r));
            log_d.push_back(std::log(d));
        }
    }
    if (log_r.size() < 2) return std::numeric_limits<double>::infinity();
    return least_squares_slope(log_r, log_d);
}

}  // namespace

FlatnessResult flatness_order(const ClosedCurve& curve, const Hit& hit, int n, const GeometryConfig& cfg) {
    if (n < 1) throw Error(ErrorCode::InvalidInput, "flatness order must be at least 1");
    const auto& seg = curve.segment(hit.segment_index);
    const Complex z1 = seg.eval(hit.t_star);

    FlatnessResult res;
    res.exponent_plus = one_sided_flatness(seg, hit.t_star, 1.0, seg.t1 - hit.t_star, z1, hit.tangent_out);
    if (hit.at_breakpoint) {
        const auto& prev = curve.segment((hit.segment_index + curve.size() - 1) % curve.size());
        res.exponent_minus = one_sided_flatness(prev, prev.t1, -1.0, prev.length(), z1, hit.tangent_in);
    } else {
        res.exponent_minus = one_sided_flatness(seg, hit.t_star, -1.0, hit.t_star - seg.t0, z1, hit.tangent_in);
    }
    const double need = static_cast<double>(n) + cfg.flatness_margin;
    res.flat = n <= 1 || (res.exponent_plus > need && res.exponent_minus > need);
    return res;
}

// --- transforms -----------------------------------------------------------------

ClosedCurve reversed(const ClosedCurve& curve) {
    std::vector<Segment> out;
    out.reserve(curve.size());
    for (auto it = curve.segments().rbegin(); it != curve.segments().rend(); ++it) {
        const Segment src = *it;
        const double sum = src.t0 + src.t1;
        Segment seg;
        seg.t0 = src.t0;
        seg.t1 = src.t1;
        seg.eval = [f = src.eval, sum](double t) { return f(sum - t); };
        seg.deriv = [f = src.deriv, sum](double t) { return -f(sum - t); };
        if (src.deriv2) seg.deriv2 = [f = *src.deriv2, sum](double t) { return f(sum - t); };
        out.push_back(std::move(seg));
    }
    return ClosedCurve(std::move(out));
}

Cycle reversed(const Cycle& cycle) {
    Cycle out;
    for (const auto& term : cycle.terms()) out.add(reversed(term.curve), term.multiplicity);
    return out;
}

ClosedCurve transformed(const ClosedCurve& curve, Complex a, Complex b) {
    std::vector<Segment> out;
    out.reserve(curve.size());
    for (const auto& src : curve.segments()) {
        Segment seg;
        seg.t0 = src.t0;
        seg.t1 = src.t1;
        seg.eval = [f = src.eval, a, b](double t) { return a * f(t) + b; };
        seg.deriv = [f = src.deriv, a](double t) { return a * f(t); };
        if (src.deriv2) seg.deriv2 = [f = *src.deriv2, a](double t) { return a * f(t); };
        out.push_back(std::move(seg));
    }
    return ClosedCurve(std::move(out));
}

Cycle transformed(const Cycle& cycle, Complex a, Complex b) {
    if (a == Complex(0.0)) throw Error(ErrorCode::InvalidInput, "affine map needs a nonzero factor");
    Cycle out;
    for (const auto& term : cycle.terms()) out.add(transformed(term.curve, a, b), term.multiplicity);
    return out;
}

}  // namespace windline
