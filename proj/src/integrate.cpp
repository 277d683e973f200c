#include "windline/integrate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "windline/error.hpp"
#include "windline/parallel.hpp"

namespace windline {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
// multiplier on eps * gross for the rounding-noise estimate of a trace value
constexpr double kNoiseFactor = 8.0;
// cancellation ratio |I(eps) - I(eps0)| / gross below which growth is attributed to rounding
constexpr double kCancellationFloor = 1e-8;

void check(const QuadratureResult& r, const char* what) {
    if (!r.finite) throw Error(ErrorCode::NoConvergence, std::string(what) + ": integrand is not finite");
    if (!r.converged) throw Error(ErrorCode::NoConvergence, std::string(what) + ": subdivision limit reached");
}

struct Fit {
    double slope = 0.0;
    double rms = 0.0;
};

Fit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
    const double n = static_cast<double>(x.size());
    const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
    const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
    double sxy = 0.0;
    double sxx = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
    }
    Fit fit;
    fit.slope = sxy / sxx;
    double ss = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double r = y[i] - (my + fit.slope * (x[i] - mx));
        ss += r * r;
    }
    fit.rms = std::sqrt(ss / n);
    return fit;
}

// Intercept of the least-squares line value = a + b eps through the points.
Complex extrapolate(const std::vector<PVTracePoint>& pts) {
    if (pts.size() == 1) return pts.front().value;
    const double n = static_cast<double>(pts.size());
    double mx = 0.0;
    Complex my{0.0, 0.0};
    for (const auto& p : pts) {
        mx += p.eps;
        my += p.value;
    }
    mx /= n;
    my /= n;
    double sxx = 0.0;
    Complex sxy{0.0, 0.0};
    for (const auto& p : pts) {
        sxx += (p.eps - mx) * (p.eps - mx);
        sxy += (p.eps - mx) * (p.value - my);
    }
    return my - (sxy / sxx) * mx;
}

// Decides convergence or divergence from the eps trace.
void classify_trace(PVResult& res, const QuadratureConfig& cfg) {
    const auto& tr = res.eps_trace;
    const std::size_t n = tr.size();
    const std::size_t tail = std::min<std::size_t>(4, n);
    const std::vector<PVTracePoint> last(tr.end() - static_cast<std::ptrdiff_t>(tail), tr.end());

    if (n >= 4) {
        std::vector<double> x;
        std::vector<double> y;
        bool zero_step = false;
        for (std::size_t k = n - std::min<std::size_t>(6, n - 1); k < n; ++k) {
            const double step = std::abs(tr[k].value - tr[k - 1].value);
            if (step == 0.0) {
                zero_step = true;
                break;
            }
            x.push_back(std::log(1.0 / tr[k].eps));
            y.push_back(std::log(step));
        }
        if (!zero_step) {
            const Fit fit = fit_line(x, y);
            const auto& end = tr.back();
            const double cancellation = std::abs(end.value - tr.front().value) / std::max(end.gross, 1e-300);
            const bool above_noise = std::abs(end.value) > 1e3 * end.noise && cancellation >= kCancellationFloor;
            if (fit.slope >= 0.5 && fit.rms < 0.2 && above_noise) {
                res.status = PVStatus::Diverged;
                res.growth_exponent = fit.slope;
                res.note = "trace grows like eps^-" + std::to_string(fit.slope);
                return;
            }
        }
    }

    const Complex value = extrapolate(last);
    const double tol = cfg.pv_tol * std::max(1.0, std::abs(value));
    if (n == 1) {
        if (tr.front().noise <= 1e-2 * tol) {
            res.status = PVStatus::Converged;
            res.value = value;
            res.note = "singular pieces cancel to rounding level; no extrapolation possible";
        } else {
            res.status = PVStatus::Inconclusive;
            res.note = "rounding noise exceeds the tolerance already at the largest exclusion radius";
        }
        return;
    }
    const double last_step = std::abs(tr[n - 1].value - tr[n - 2].value);
    const bool small = last_step <= tol;
    bool contracting = last_step <= 2.0 * (tr[n - 1].noise + tr[n - 2].noise);
    if (!contracting && n >= 3) {
        const double prev_step = std::abs(tr[n - 2].value - tr[n - 3].value);
        contracting = last_step <= 0.8 * prev_step;
    }
    if (small && contracting) {
        res.status = PVStatus::Converged;
        res.value = value;
        if (res.note.empty()) res.note = res.noise_limited ? "trace truncated at the rounding-noise floor" : "";
    } else {
        res.status = PVStatus::Inconclusive;
        res.note = "trace neither contracts nor follows a power law";
    }
}

}  // namespace

void QuadratureConfig::validate() const {
    if (!(abs_tol > 0.0) || !(rel_tol > 0.0)) throw Error(ErrorCode::InvalidInput, "tolerances must be positive");
    if (!(eps_ratio > 0.0 && eps_ratio < 1.0)) throw Error(ErrorCode::InvalidInput, "eps_ratio must lie in (0, 1)");
    if (eps_steps < 4) throw Error(ErrorCode::InvalidInput, "eps_steps must be at least 4");
    if (!(eps0 > 0.0)) throw Error(ErrorCode::InvalidInput, "eps0 must be positive");
    if (max_subdivisions < 1) throw Error(ErrorCode::InvalidInput, "max_subdivisions must be positive");
}

std::string_view to_string(PVStatus status) {
    switch (status) {
        case PVStatus::Converged: return "Converged";
        case PVStatus::Diverged: return "Diverged";
        case PVStatus::Inconclusive: return "Inconclusive";
    }
    return "Inconclusive";
}

QuadratureResult integrate_along(const std::function<Complex(Complex)>& f, const ClosedCurve& curve, double from,
                                 double to, const QuadratureConfig& cfg) {
    if (from > to) {
        auto r = integrate_along(f, curve, to, from, cfg);
        r.value = -r.value;
        return r;
    }
    QuadratureResult total;
    total.converged = true;
    const auto n = static_cast<long long>(curve.size());
    double s = from;
    while (s < to) {
        const double cell = std::floor(s);
        const double stop = std::min(to, cell + 1.0);
        const long long k = ((static_cast<long long>(cell) % n) + n) % n;
        const auto& seg = curve.segment(static_cast<std::size_t>(k));
        const double ta = seg.t0 + (s - cell) * seg.length();
        const double tb = stop == cell + 1.0 ? seg.t1 : seg.t0 + (stop - cell) * seg.length();
        if (tb > ta) {
            auto piece = integrate_adaptive([&](double t) { return f(seg.eval(t)) * seg.deriv(t); }, ta, tb,
                                            cfg.abs_tol, cfg.rel_tol, cfg.max_subdivisions);
            total.value += piece.value;
            total.error += piece.error;
            total.gross += piece.gross;
            total.intervals += piece.intervals;
            total.converged = total.converged && piece.converged;
            total.finite = total.finite && piece.finite;
        }
        s = stop;
    }
    return total;
}

Complex line_integral(const std::function<Complex(Complex)>& f, const Cycle& cycle, const QuadratureConfig& cfg) {
    cfg.validate();
    std::vector<std::pair<std::size_t, std::size_t>> tasks;
    for (std::size_t c = 0; c < cycle.size(); ++c) {
        for (std::size_t k = 0; k < cycle.terms()[c].curve.size(); ++k) tasks.emplace_back(c, k);
    }
    auto parts = parallel_map(tasks.size(), [&](std::size_t i) {
        const auto& curve = cycle.terms()[tasks[i].first].curve;
        const double s = static_cast<double>(tasks[i].second);
        return integrate_along(f, curve, s, s + 1.0, cfg);
    });
    Complex total{0.0, 0.0};
    for (std::size_t i = 0; i < tasks.size(); ++i) {
        check(parts[i], "line integral");
        total += static_cast<double>(cycle.terms()[tasks[i].first].multiplicity) * parts[i].value;
    }
    return total;
}

Complex line_integral(const AnalyticFunction& f, const Cycle& cycle, const QuadratureConfig& cfg) {
    for (const auto& s : f.singularities) {
        if (!find_hits(cycle, s.location, cfg.geometry).empty()) {
            throw Error(ErrorCode::SingularityOnPath, "a declared singularity lies on the integration path");
        }
    }
    return line_integral(f.eval, cycle, cfg);
}

// --- exclusion windows ----------------------------------------------------------

namespace {

double march_to_radius(const ClosedCurve& curve, double s_star, Complex z0, double eps, double dir) {
    const double n = static_cast<double>(curve.size());
    double s = s_star;
    for (int step = 0; step < 1000000; ++step) {
        const double d = std::abs(curve.eval_global(s) - z0);
        const double speed = std::abs(curve.deriv_global(s + dir * 1e-13 * std::max(1.0, n)));
        double ds = std::max(0.5 * (eps - d), 0.05 * eps) / std::max(speed, 1e-300);
        ds = std::min(ds, 0.25);
        const double next = s + dir * ds;
        if (std::abs(next - s_star) >= n) {
            throw Error(ErrorCode::WindowEscape, "exclusion window swallows the whole curve");
        }
        if (std::abs(curve.eval_global(next) - z0) >= eps) {
            double inside = s;
            double outside = next;
            for (int it = 0; it < 200; ++it) {
                const double mid = 0.5 * (inside + outside);
                if (mid == inside || mid == outside) break;
                if (std::abs(curve.eval_global(mid) - z0) >= eps) {
                    outside = mid;
                } else {
                    inside = mid;
                }
            }
            return 0.5 * (inside + outside);
        }
        s = next;
    }
    throw Error(ErrorCode::WindowEscape, "exclusion window boundary not found");
}

}  // namespace

ExclusionWindow exclusion_windows(const ClosedCurve& curve, const Hit& hit, double eps) {
    if (!(eps > 0.0)) throw Error(ErrorCode::InvalidInput, "exclusion radius must be positive");
    ExclusionWindow w;
    w.end = march_to_radius(curve, hit.position, hit.point, eps, 1.0);
    w.start = march_to_radius(curve, hit.position, hit.point, eps, -1.0);
    if (w.end - w.start >= static_cast<double>(curve.size())) {
        throw Error(ErrorCode::WindowEscape, "exclusion window wraps around the curve");
    }
    return w;
}

// --- principal value ------------------------------------------------------------

PVResult pv_integral(const AnalyticFunction& f, const Cycle& cycle, const std::vector<OnPathSingularity>& on_path,
                     const QuadratureConfig& cfg) {
    cfg.validate();
    struct Site {
        std::size_t curve;
        Hit hit;
    };
    std::vector<Site> sites;
    for (const auto& group : on_path) {
        for (const auto& h : group.hits) sites.push_back({h.curve_index, h});
    }
    PVResult result;
    if (sites.empty()) {
        result.value = line_integral(f.eval, cycle, cfg);
        result.status = PVStatus::Converged;
        result.note = "no singularity on the path";
        return result;
    }

    const double scale = cycle.scale();
    const int steps = cfg.eps_steps;
    std::vector<double> eps(static_cast<std::size_t>(steps));
    for (int k = 0; k < steps; ++k) eps[static_cast<std::size_t>(k)] = cfg.eps0 * scale * std::pow(cfg.eps_ratio, k);

    // windows[site][k]
    std::vector<std::vector<ExclusionWindow>> windows(sites.size());
    for (std::size_t i = 0; i < sites.size(); ++i) {
        const auto& curve = cycle.terms()[sites[i].curve].curve;
        for (int k = 0; k < steps; ++k) {
            windows[i].push_back(exclusion_windows(curve, sites[i].hit, eps[static_cast<std::size_t>(k)]));
        }
    }

    // integral over everything outside the largest windows
    Complex outer{0.0, 0.0};
    double outer_gross = 0.0;
    double outer_err = 0.0;
    for (std::size_t c = 0; c < cycle.size(); ++c) {
        const auto& term = cycle.terms()[c];
        const double n = static_cast<double>(term.curve.size());
        std::vector<ExclusionWindow> mine;
        for (std::size_t i = 0; i < sites.size(); ++i) {
            if (sites[i].curve == c) mine.push_back(windows[i][0]);
        }
        std::vector<std::pair<double, double>> gaps;
        if (mine.empty()) {
            gaps.emplace_back(0.0, n);
        } else {
            for (auto& w : mine) {
                const double shift = std::floor(w.start / n) * n;
                w.start -= shift;
                w.end -= shift;
            }
            std::sort(mine.begin(), mine.end(), [](const auto& a, const auto& b) { return a.start < b.start; });
            for (std::size_t i = 0; i < mine.size(); ++i) {
                const double next_start = i + 1 < mine.size() ? mine[i + 1].start : mine[0].start + n;
                if (mine[i].end >= next_start) {
                    throw Error(ErrorCode::OverlappingExclusions,
                                "exclusion windows of on-path singularities overlap at the largest radius; "
                                "reduce eps0");
                }
                gaps.emplace_back(mine[i].end, next_start);
            }
        }
        const double m = static_cast<double>(term.multiplicity);
        for (const auto& [a, b] : gaps) {
            auto r = integrate_along(f.eval, term.curve, a, b, cfg);
            check(r, "principal value (outer part)");
            outer += m * r.value;
            outer_gross += std::abs(m) * r.gross;
            outer_err += std::abs(m) * r.error;
        }
    }

    const double budget = std::max(1e3 * cfg.abs_tol, 1e-9 * std::max(1.0, std::abs(outer)));
    Complex running = outer;
    double gross = 0.0;
    double err = outer_err;
    result.eps_trace.push_back({eps[0], outer, 0.0, kNoiseFactor * kEps * outer_gross + outer_err});

    for (int k = 1; k < steps; ++k) {
        const auto ku = static_cast<std::size_t>(k);
        Complex step_value{0.0, 0.0};
        double step_gross = 0.0;
        bool converged = true;
        double boundary = 0.0;  // sensitivity of the trace to rounding in the window endpoints
        for (std::size_t i = 0; i < sites.size(); ++i) {
            const auto& term = cycle.terms()[sites[i].curve];
            const auto& cur = windows[i][ku];
            const auto& prev = windows[i][ku - 1];
            auto in = integrate_along(f.eval, term.curve, prev.start, cur.start, cfg);
            auto out = integrate_along(f.eval, term.curve, cur.end, prev.end, cfg);
            if (!in.finite || !out.finite) throw Error(ErrorCode::NoConvergence, "principal value: integrand is not finite");
            if (!in.converged || !out.converged) {
                converged = false;
                break;
            }
            const double m = static_cast<double>(term.multiplicity);
            boundary += std::abs(m) * (std::abs(f(term.curve.eval_global(cur.start))) +
                                       std::abs(f(term.curve.eval_global(cur.end))));
            step_value += m * (in.value + out.value);
            step_gross += std::abs(m) * (in.gross + out.gross);
            err += std::abs(m) * (in.error + out.error);
        }
        if (!converged) {
            // quadrature cannot resolve the piece above rounding in z - z0
            result.noise_limited = true;
            break;
        }
        running += step_value;
        gross += step_gross;
        const double noise = kNoiseFactor * kEps * (outer_gross + gross + scale * boundary) + err;
        const double cancellation = std::abs(running - outer) / std::max(gross, 1e-300);
        if (noise > budget && cancellation < kCancellationFloor) {
            result.noise_limited = true;
            break;
        }
        result.eps_trace.push_back({eps[ku], running, gross, noise});
    }
    classify_trace(result, cfg);
    return result;
}

PVResult pv_integral(const AnalyticFunction& f, const Cycle& cycle, const QuadratureConfig& cfg) {
    std::vector<OnPathSingularity> on_path;
    for (const auto& s : f.singularities) {
        auto hits = find_hits(cycle, s.location, cfg.geometry);
        if (!hits.empty()) on_path.push_back({s.location, std::move(hits)});
    }
    return pv_integral(f, cycle, on_path, cfg);
}

}  // namespace windline
