#pragma once

#include <optional>
#include <string>
#include <vector>

#include "windline/integrate.hpp"

namespace windline {

enum class WindingMethod { PV, BoundedReal, Geometric, ClassicalInteger };
std::string_view to_string(WindingMethod method);

/// One-sided limits of the bounded integrand used inside the guard window of a hit.
struct GuardValue {
    std::size_t hit_index = 0;
    double before = 0.0;  ///< limit approaching the hit from smaller parameters
    double after = 0.0;   ///< limit leaving the hit
};

struct WindingReport {
    double value = 0.0;
    WindingMethod method = WindingMethod::ClassicalInteger;
    std::vector<Hit> hits;
    long integer_part_tilde = 0;  ///< Geometric: winding of the detoured cycle
    double angle_sum = 0.0;       ///< Geometric: sum of multiplicity * alpha / 2pi
    double delta = 0.0;           ///< Geometric: detour radius actually used
    double imaginary_residue = 0.0;  ///< PV: |Im| of the PV integral divided by 2 pi i
    std::optional<PVResult> pv;
    std::vector<GuardValue> guard_values;
    std::vector<std::string> warnings;
};

/// Signed count of crossings of a ray from z0, weighted by multiplicity.
long ray_crossing_count(const Cycle& cycle, Complex z0, double direction_angle = 0.7390851332151607);

/// Classical integer winding number for a point off the trace.
long winding_off_curve(const Cycle& cycle, Complex z0, const QuadratureConfig& cfg = {});

WindingReport winding_pv(const Cycle& cycle, Complex z0, const QuadratureConfig& cfg = {});

/// Real-form integrand (x y' - y x') / (x^2 + y^2), bounded for C^{1,1} curves.
double bounded_integrand(const Segment& seg, double t, Complex z0);

WindingReport winding_bounded(const Cycle& cycle, Complex z0, const QuadratureConfig& cfg = {});

/// The cycle with every pass through z0 replaced by a clockwise arc of radius delta.
Cycle detoured_cycle(const Cycle& cycle, const std::vector<Hit>& hits, double delta);

/// delta <= 0 selects the default 1e-3 scale, halved until the detours separate.
WindingReport winding_geometric(const Cycle& cycle, Complex z0, double delta = 0.0, const QuadratureConfig& cfg = {});

}  // namespace windline
