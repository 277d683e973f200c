#pragma once

#include <string>
#include <vector>

#include "windline/geometry.hpp"
#include "windline/laurent.hpp"
#include "windline/quadrature.hpp"

namespace windline {

struct QuadratureConfig {
    double abs_tol = 1e-12;
    double rel_tol = 1e-12;
    std::size_t max_subdivisions = 4000;
    double eps0 = 1e-2;  ///< initial exclusion radius, relative to the cycle scale
    double eps_ratio = 0.5;
    int eps_steps = 14;
    double pv_tol = 1e-4;  ///< contraction tolerance on the trace, relative to max(1, |value|)
    GeometryConfig geometry;

    void validate() const;
};

enum class PVStatus { Converged, Diverged, Inconclusive };
std::string_view to_string(PVStatus status);

struct PVTracePoint {
    double eps = 0.0;
    Complex value;
    double gross = 0.0;  ///< accumulated integral of |f dz| over the trimmed pieces
    double noise = 0.0;  ///< rounding-noise estimate for `value`
};

struct PVResult {
    PVStatus status = PVStatus::Inconclusive;
    Complex value;                ///< valid iff Converged
    double growth_exponent = 0.0; ///< valid iff Diverged
    std::vector<PVTracePoint> eps_trace;
    bool noise_limited = false;   ///< trace stopped early because cancellation hit rounding level
    std::string note;
};

/// Parameter interval [start, end] of the global curve coordinate around a hit
/// (start may be negative or end beyond N; both wrap cyclically).
struct ExclusionWindow {
    double start = 0.0;
    double end = 0.0;
};

/// Singularity location plus every place the cycle passes through it.
struct OnPathSingularity {
    Complex location;
    std::vector<Hit> hits;
};

/// Integral of f along the curve between two global coordinates (from < to).
QuadratureResult integrate_along(const std::function<Complex(Complex)>& f, const ClosedCurve& curve, double from,
                                 double to, const QuadratureConfig& cfg);

Complex line_integral(const AnalyticFunction& f, const Cycle& cycle, const QuadratureConfig& cfg = {});
/// Same, without checking declared singularities against the trace.
Complex line_integral(const std::function<Complex(Complex)>& f, const Cycle& cycle, const QuadratureConfig& cfg = {});

ExclusionWindow exclusion_windows(const ClosedCurve& curve, const Hit& hit, double eps);

PVResult pv_integral(const AnalyticFunction& f, const Cycle& cycle, const std::vector<OnPathSingularity>& on_path,
                     const QuadratureConfig& cfg = {});

/// Finds every declared singularity on the trace and integrates in the PV sense.
PVResult pv_integral(const AnalyticFunction& f, const Cycle& cycle, const QuadratureConfig& cfg = {});

}  // namespace windline
