#include "windline/winding.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "windline/error.hpp"
#include "windline/quadrature.hpp"

namespace windline {

std::string_view to_string(WindingMethod method) {
    switch (method) {
        case WindingMethod::PV: return "PV";
        case WindingMethod::BoundedReal: return "BoundedReal";
        case WindingMethod::Geometric: return "Geometric";
        case WindingMethod::ClassicalInteger: return "ClassicalInteger";
    }
    return "ClassicalInteger";
}

// --- classical winding ------------------------------------------------------------

namespace {

constexpr std::size_t kRaySamples = 2048;

// Signed crossings of one segment with the ray z0 + r d, r > 0. Samples on the
// ray's supporting line count as lying on its left.
long segment_crossings(const Segment& seg, Complex z0, Complex d) {
    const Complex dc = std::conj(d);
    auto side = [&](double t) { return std::imag(dc * (seg.eval(t) - z0)); };
    auto along = [&](double t) { return std::real(dc * (seg.eval(t) - z0)); };
    long count = 0;
    double t_prev = seg.t0;
    double g_prev = side(t_prev);
    for (std::size_t j = 1; j <= kRaySamples; ++j) {
        const double t = j == kRaySamples ? seg.t1
                                          : seg.t0 + seg.length() * static_cast<double>(j) / static_cast<double>(kRaySamples);
        const double g = side(t);
        const bool left_prev = g_prev >= 0.0;
        const bool left = g >= 0.0;
        if (left_prev != left) {
            double lo = t_prev;
            double hi = t;
            for (int it = 0; it < 100; ++it) {
                const double mid = 0.5 * (lo + hi);
                if (mid == lo || mid == hi) break;
                if ((side(mid) >= 0.0) == left_prev) {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            if (along(0.5 * (lo + hi)) > 0.0) count += left ? 1 : -1;
        }
        t_prev = t;
        g_prev = g;
    }
    return count;
}

}  // namespace

long ray_crossing_count(const Cycle& cycle, Complex z0, double direction_angle) {
    const Complex d = std::polar(1.0, direction_angle);
    long total = 0;
    for (const auto& term : cycle.terms()) {
        long n = 0;
        for (const auto& seg : term.curve.segments()) n += segment_crossings(seg, z0, d);
        total += term.multiplicity * n;
    }
    return total;
}

long winding_off_curve(const Cycle& cycle, Complex z0, const QuadratureConfig& cfg) {
    if (!find_hits(cycle, z0, cfg.geometry).empty()) {
        throw Error(ErrorCode::PointOnCurve, "the point lies on the cycle; use a generalized method");
    }
    const Complex integral = line_integral([z0](Complex z) { return 1.0 / (z - z0); }, cycle, cfg);
    const Complex w = integral / Complex(0.0, kTwoPi);
    const double rounded = std::round(w.real());
    const double residual = std::abs(w - rounded);
    if (residual >= 1e-6) {
        throw Error(ErrorCode::NoConvergence, "winding integral is not close to an integer (residual " +
                                                  std::to_string(residual) + ")");
    }
    const auto n = static_cast<long>(rounded);
    if (ray_crossing_count(cycle, z0) != n && ray_crossing_count(cycle, z0, 2.2360679774997896) != n) {
        throw Error(ErrorCode::OracleMismatch, "ray-crossing count disagrees with the winding integral");
    }
    return n;
}

// --- principal value --------------------------------------------------------------

WindingReport winding_pv(const Cycle& cycle, Complex z0, const QuadratureConfig& cfg) {
    WindingReport report;
    report.method = WindingMethod::PV;
    report.hits = find_hits(cycle, z0, cfg.geometry);

    AnalyticFunction f;
    f.eval = [z0](Complex z) { return 1.0 / (z - z0); };
    Singularity s;
    s.location = z0;
    s.kind = SingularityKind::Pole;
    s.order = 1;
    s.residue = Complex(1.0, 0.0);
    f.singularities.push_back(s);

    std::vector<OnPathSingularity> on_path;
    if (!report.hits.empty()) on_path.push_back({z0, report.hits});
    auto pv = pv_integral(f, cycle, on_path, cfg);
    if (pv.status != PVStatus::Converged) {
        throw Error(ErrorCode::NoConvergence, "principal value of the winding integral did not converge");
    }
    const Complex w = pv.value / Complex(0.0, kTwoPi);
    report.value = w.real();
    report.imaginary_residue = std::abs(w.imag());
    if (report.imaginary_residue > 1e-6) report.warnings.push_back("imaginary part of the PV winding is not small");
    report.pv = std::move(pv);
    return report;
}

// --- bounded real integrand ---------------------------------------------------------

double bounded_integrand(const Segment& seg, double t, Complex z0) {
    return std::imag(seg.deriv(t) / (seg.eval(t) - z0));
}

namespace {

// Limit of the bounded integrand at a hit: half the curvature times the speed.
double guard_limit(const Segment& seg, double t, const QuadratureConfig& cfg) {
    Complex acc;
    try {
        acc = second_derivative(seg, t, cfg.geometry.fd_second_derivative);
    } catch (const Error&) {
        throw Error(ErrorCode::NotC11NearHit, "no second derivative available near the hit");
    }
    const Complex v = seg.deriv(t);
    const double speed = std::abs(v);
    const double value = 0.5 * std::imag(std::conj(v) * acc) / (speed * speed);
    if (!std::isfinite(value)) throw Error(ErrorCode::NotC11NearHit, "curvature is not finite at the hit");
    return value;
}

struct Guard {
    double a = 0.0;  // parameter interval excluded from adaptive quadrature
    double b = 0.0;
    double contribution = 0.0;
};

}  // namespace

WindingReport winding_bounded(const Cycle& cycle, Complex z0, const QuadratureConfig& cfg) {
    cfg.validate();
    WindingReport report;
    report.method = WindingMethod::BoundedReal;
    report.hits = find_hits(cycle, z0, cfg.geometry);

    double total = 0.0;
    for (std::size_t c = 0; c < cycle.size(); ++c) {
        const auto& term = cycle.terms()[c];
        const auto& curve = term.curve;
        const std::size_t n = curve.size();
        std::vector<std::vector<Guard>> guards(n);

        // parameters of hits per segment, for sizing guards
        std::vector<std::vector<double>> marks(n);
        for (const auto& h : report.hits) {
            if (h.curve_index == c) marks[h.segment_index].push_back(h.t_star);
        }
        auto room = [&](std::size_t k, double t) {
            const auto& seg = curve.segment(k);
            double r = std::min(t - seg.t0, seg.t1 - t);
            if (r <= 0.0) r = seg.length();
            for (double m : marks[k]) {
                if (m != t) r = std::min(r, std::abs(m - t));
            }
            return 0.25 * r;
        };

        for (std::size_t i = 0; i < report.hits.size(); ++i) {
            const auto& h = report.hits[i];
            if (h.curve_index != c) continue;
            const std::size_t k = h.segment_index;
            const auto& seg = curve.segment(k);
            GuardValue gv;
            gv.hit_index = i;

            double w_after = std::min(1e-4 * seg.length(), room(k, h.t_star));
            gv.after = guard_limit(seg, h.t_star, cfg);
            const double g_after = bounded_integrand(seg, h.t_star + w_after, z0);
            guards[k].push_back({h.t_star, h.t_star + w_after, 0.5 * w_after * (gv.after + g_after)});

            if (h.at_breakpoint) {
                const std::size_t p = (k + n - 1) % n;
                const auto& prev = curve.segment(p);
                const double w_before = std::min(1e-4 * prev.length(), room(p, prev.t1));
                gv.before = guard_limit(prev, prev.t1, cfg);
                const double g_before = bounded_integrand(prev, prev.t1 - w_before, z0);
                guards[p].push_back({prev.t1 - w_before, prev.t1, 0.5 * w_before * (gv.before + g_before)});
            } else {
                const double w_before = w_after;
                gv.before = guard_limit(seg, h.t_star, cfg);
                const double g_before = bounded_integrand(seg, h.t_star - w_before, z0);
                guards[k].push_back({h.t_star - w_before, h.t_star, 0.5 * w_before * (gv.before + g_before)});
            }
            report.guard_values.push_back(gv);
        }

        double curve_total = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            const auto& seg = curve.segment(k);
            auto& gs = guards[k];
            std::sort(gs.begin(), gs.end(), [](const Guard& x, const Guard& y) { return x.a < y.a; });
            double cursor = seg.t0;
            auto integrate = [&](double a, double b) {
                if (!(b > a)) return;
                auto r = integrate_adaptive([&](double t) { return Complex(bounded_integrand(seg, t, z0), 0.0); }, a,
                                            b, cfg.abs_tol, cfg.rel_tol, cfg.max_subdivisions);
                if (!r.finite) throw Error(ErrorCode::NotC11NearHit, "bounded integrand is not finite");
                if (!r.converged) throw Error(ErrorCode::NoConvergence, "bounded integrand quadrature did not converge");
                curve_total += r.value.real();
            };
            for (const auto& g : gs) {
                integrate(cursor, g.a);
                curve_total += g.contribution;
                cursor = std::max(cursor, g.b);
            }
            integrate(cursor, seg.t1);
        }
        total += static_cast<double>(term.multiplicity) * curve_total;
    }
    report.value = total / kTwoPi;
    return report;
}

// --- geometric ------------------------------------------------------------------

namespace {

Segment restricted(const Segment& seg, double ta, double tb) {
    Segment s = seg;
    s.t0 = ta;
    s.t1 = tb;
    return s;
}

// Pieces of the original curve between two global coordinates (a < b).
void append_range(std::vector<Segment>& out, const ClosedCurve& curve, double a, double b) {
    const auto n = static_cast<long long>(curve.size());
    double s = a;
    while (s < b) {
        const double cell = std::floor(s);
        const double stop = std::min(b, cell + 1.0);
        const long long k = ((static_cast<long long>(cell) % n) + n) % n;
        const auto& seg = curve.segment(static_cast<std::size_t>(k));
        const double ta = seg.t0 + (s - cell) * seg.length();
        const double tb = stop == cell + 1.0 ? seg.t1 : seg.t0 + (stop - cell) * seg.length();
        if (tb - ta > 1e-14 * seg.length()) out.push_back(restricted(seg, ta, tb));
        s = stop;
    }
}

// Clockwise arc around z0 from p to q; the radius interpolates so both ends are exact.
std::optional<Segment> clockwise_arc(Complex z0, Complex p, Complex q) {
    const double ra = std::abs(p - z0);
    const double rb = std::abs(q - z0);
    const double ta = std::arg(p - z0);
    double d = std::fmod(ta - std::arg(q - z0), kTwoPi);
    if (d < 0.0) d += kTwoPi;
    if (d < 1e-12) return std::nullopt;
    const double sweep = -d;
    const double dr = rb - ra;
    Segment seg;
    seg.t0 = 0.0;
    seg.t1 = 1.0;
    seg.eval = [=](double t) { return z0 + std::polar(ra + dr * t, ta + sweep * t); };
    seg.deriv = [=](double t) {
        const Complex e = std::polar(1.0, ta + sweep * t);
        return dr * e + (ra + dr * t) * Complex(0.0, sweep) * e;
    };
    seg.deriv2 = [=](double t) {
        const Complex e = std::polar(1.0, ta + sweep * t);
        return 2.0 * dr * Complex(0.0, sweep) * e - (ra + dr * t) * sweep * sweep * e;
    };
    return seg;
}

}  // namespace

Cycle detoured_cycle(const Cycle& cycle, const std::vector<Hit>& hits, double delta) {
    if (!(delta > 0.0)) throw Error(ErrorCode::InvalidInput, "detour radius must be positive");
    Cycle out;
    for (std::size_t c = 0; c < cycle.size(); ++c) {
        const auto& term = cycle.terms()[c];
        const auto& curve = term.curve;
        const double n = static_cast<double>(curve.size());
        std::vector<std::pair<ExclusionWindow, Complex>> mine;
        for (const auto& h : hits) {
            if (h.curve_index != c) continue;
            ExclusionWindow w;
            try {
                w = exclusion_windows(curve, h, delta);
            } catch (const Error& e) {
                if (e.code() == ErrorCode::WindowEscape) throw Error(ErrorCode::DetourOverlap, e.what());
                throw;
            }
            const double shift = std::floor(w.start / n) * n;
            w.start -= shift;
            w.end -= shift;
            mine.emplace_back(w, h.point);
        }
        if (mine.empty()) {
            out.add(curve, term.multiplicity);
            continue;
        }
        std::sort(mine.begin(), mine.end(), [](const auto& x, const auto& y) { return x.first.start < y.first.start; });
        std::vector<Segment> segs;
        for (std::size_t i = 0; i < mine.size(); ++i) {
            const auto& w = mine[i].first;
            const double next_start = i + 1 < mine.size() ? mine[i + 1].first.start : mine[0].first.start + n;
            if (w.end >= next_start) throw Error(ErrorCode::DetourOverlap, "detour arcs overlap");
            if (auto arc = clockwise_arc(mine[i].second, curve.eval_global(w.start), curve.eval_global(w.end))) {
                segs.push_back(std::move(*arc));
            }
            append_range(segs, curve, w.end, next_start);
        }
        out.add(ClosedCurve(std::move(segs)), term.multiplicity);
    }
    return out;
}

WindingReport winding_geometric(const Cycle& cycle, Complex z0, double delta, const QuadratureConfig& cfg) {
    WindingReport report;
    report.method = WindingMethod::Geometric;
    report.hits = find_hits(cycle, z0, cfg.geometry);
    if (report.hits.empty()) {
        report.integer_part_tilde = winding_off_curve(cycle, z0, cfg);
        report.value = static_cast<double>(report.integer_part_tilde);
        return report;
    }
    for (const auto& h : report.hits) {
        report.angle_sum += static_cast<double>(cycle.terms()[h.curve_index].multiplicity) * h.alpha / kTwoPi;
        if (h.degenerate) report.warnings.push_back("corner angle is degenerate (near 0 or 2pi)");
    }

    const double scale = cycle.scale();
    const bool automatic = !(delta > 0.0);
    double d = automatic ? 1e-3 * scale : delta;
    for (;;) {
        try {
            const Cycle detoured = detoured_cycle(cycle, report.hits, d);
            report.integer_part_tilde = winding_off_curve(detoured, z0, cfg);
            break;
        } catch (const Error& e) {
            if (e.code() != ErrorCode::DetourOverlap || !automatic) throw;
            d *= 0.5;
            if (d < 1e-8 * scale) throw Error(ErrorCode::DetourOverlap, "no detour radius separates the hits");
        }
    }
    report.delta = d;
    report.value = static_cast<double>(report.integer_part_tilde) + report.angle_sum;
    return report;
}

}  // namespace windline
