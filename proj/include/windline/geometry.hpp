#pragma once

#include <complex>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace windline {

using Complex = std::complex<double>;
using CurveFn = std::function<Complex(double)>;

inline constexpr double kTwoPi = 6.283185307179586476925286766559;
inline constexpr double kPi = 3.141592653589793238462643383280;

/// One C1 piece of a curve: position, velocity and optionally acceleration
/// as functions of the parameter t in [t0, t1].
struct Segment {
    CurveFn eval;
    CurveFn deriv;
    std::optional<CurveFn> deriv2;
    double t0 = 0.0;
    double t1 = 1.0;

    double length() const { return t1 - t0; }
};

/// A point on a closed curve addressed by a global parameter s in [0, N):
/// the integer part selects the segment, the fraction runs linearly over
/// that segment's [t0, t1].
struct CurveLocation {
    std::size_t segment = 0;
    double t = 0.0;
};

class ClosedCurve {
public:
    ClosedCurve() = default;
    explicit ClosedCurve(std::vector<Segment> segments) : segments_(std::move(segments)) {}

    const std::vector<Segment>& segments() const { return segments_; }
    std::size_t size() const { return segments_.size(); }
    const Segment& segment(std::size_t k) const { return segments_.at(k); }

    /// Maximum |Lambda(t)| over a 257-point sample of every segment.
    double scale() const;

    CurveLocation locate(double s) const;
    double global(std::size_t segment, double t) const;

    Complex eval_global(double s) const;
    /// d Lambda / ds (parameter speed rescaled to the global coordinate).
    Complex deriv_global(double s) const;

private:
    std::vector<Segment> segments_;
};

struct CycleTerm {
    int multiplicity = 1;
    ClosedCurve curve;
};

/// Integer-weighted formal sum of closed curves.
class Cycle {
public:
    Cycle() = default;
    explicit Cycle(std::vector<CycleTerm> terms) : terms_(std::move(terms)) {}
    Cycle(ClosedCurve curve, int multiplicity = 1) { add(std::move(curve), multiplicity); }  // NOLINT

    void add(ClosedCurve curve, int multiplicity = 1) { terms_.push_back({multiplicity, std::move(curve)}); }
    void append(const Cycle& other) { terms_.insert(terms_.end(), other.terms_.begin(), other.terms_.end()); }

    const std::vector<CycleTerm>& terms() const { return terms_; }
    std::size_t size() const { return terms_.size(); }
    double scale() const;

private:
    std::vector<CycleTerm> terms_;
};

/// A parameter location where the cycle passes through a query point.
struct Hit {
    std::size_t curve_index = 0;
    std::size_t segment_index = 0;
    double t_star = 0.0;
    double position = 0.0;    ///< global parameter on the curve
    Complex point;            ///< the query point z0
    Complex tangent_in;       ///< unit vector along -Lambda'(t*-)
    Complex tangent_out;      ///< unit vector along  Lambda'(t*+)
    double alpha = 0.0;       ///< corner angle in [0, 2pi)
    bool at_breakpoint = false;
    bool degenerate = false;  ///< alpha within 1e-6 of 0 or 2pi
};

struct GeometryConfig {
    double hit_tol = 1e-11;        ///< relative to scale
    std::size_t grid_points = 1024; ///< per segment for hit bracketing
    std::size_t max_hits = 64;
    double join_tol = 1e-9;
    double immersion_tol = 1e-8;
    std::size_t immersion_samples = 257;
    double flatness_margin = 0.25;
    bool fd_second_derivative = true;
};

// --- validation ---------------------------------------------------------

struct ImmersionReport {
    bool ok = true;
    double min_speed = 0.0;
    std::size_t curve_index = 0;
    std::size_t segment_index = 0;
    double t_at_min = 0.0;
    std::vector<std::string> problems;
};

/// Samples |Lambda'| on every segment and checks joins, closure and finiteness.
ImmersionReport inspect_immersion(const Cycle& cycle, const GeometryConfig& cfg = {});
/// Throws NonImmersion (or InvalidInput for broken joins) when inspection fails.
ImmersionReport validate_immersion(const Cycle& cycle, const GeometryConfig& cfg = {});

// --- hits and local geometry ----------------------------------------------

std::vector<Hit> find_hits(const Cycle& cycle, Complex z0, double tol, const GeometryConfig& cfg = {});
inline std::vector<Hit> find_hits(const Cycle& cycle, Complex z0, const GeometryConfig& cfg = {}) {
    return find_hits(cycle, z0, cfg.hit_tol, cfg);
}

/// Positively oriented angle from tangent_out to tangent_in, in [0, 2pi).
double corner_angle(const Hit& hit);
double corner_angle(Complex tangent_in, Complex tangent_out);

/// Second derivative of a segment, analytic when available, otherwise central
/// differences of the first derivative with h = eps^(1/3) (1 + |t|).
Complex second_derivative(const Segment& seg, double t, bool allow_fd = true);

double signed_curvature(const Segment& seg, double t, bool allow_fd = true);
double signed_curvature(const ClosedCurve& curve, std::size_t segment, double t, bool allow_fd = true);
/// Uses the first segment whose parameter range contains t.
double signed_curvature(const ClosedCurve& curve, double t, bool allow_fd = true);

struct FlatnessResult {
    bool flat = false;
    double exponent_plus = 0.0;   ///< fitted slope of log d vs log r after the hit
    double exponent_minus = 0.0;  ///< and before it; +inf when d vanishes to rounding
    double exponent() const { return exponent_plus < exponent_minus ? exponent_plus : exponent_minus; }
};

/// Estimates whether the curve deviates from its one-sided tangents by
/// o(r^n) near the hit.
FlatnessResult flatness_order(const ClosedCurve& curve, const Hit& hit, int n, const GeometryConfig& cfg = {});

// --- transforms -------------------------------------------------------------

ClosedCurve reversed(const ClosedCurve& curve);
Cycle reversed(const Cycle& cycle);
/// z -> a z + b applied to every curve.
ClosedCurve transformed(const ClosedCurve& curve, Complex a, Complex b);
Cycle transformed(const Cycle& cycle, Complex a, Complex b);

}  // namespace windline
