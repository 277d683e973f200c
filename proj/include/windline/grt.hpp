#pragma once

#include <optional>
#include <string>
#include <vector>

#include "windline/integrate.hpp"
#include "windline/laurent.hpp"
#include "windline/winding.hpp"

namespace windline {

enum class Verdict { Verified, ConditionsFailed, LhsDiverged, LhsInconclusive, Mismatch };
std::string_view to_string(Verdict verdict);

struct GrtConfig {
    QuadratureConfig quadrature;
    LaurentConfig laurent;
    double verify_tol = 1e-7;     ///< relative to max(1, |rhs|)
    double essential_tol = 1e-4;  ///< used instead when an essential singularity is involved
    int q_max = 64;
    double angle_tol = 1e-8;
    double straight_tol = 1e-9;     ///< relative to the cycle scale
    double straight_radius = 1e-2;  ///< relative to the cycle scale
    WindingMethod on_curve_method = WindingMethod::BoundedReal;
    std::vector<Complex> exterior_probes;  ///< points where the cycle must have winding 0
};

struct ConditionA {
    bool ok = true;
    double exponent = 0.0;  ///< smallest fitted flatness exponent over the hits
};

struct RationalAngle {
    int p = 1;
    int q = 1;
};

struct ConditionB {
    bool ok = true;
    RationalAngle angle;
    std::vector<int> admissible;  ///< pole indices n of the form 2kq/p + 1 up to the depth
    std::vector<int> offending;
};

struct SingularityReport {
    Singularity singularity;
    double winding = 0.0;
    bool on_cycle = false;
    std::vector<Hit> hits;
    ConditionA cond_a;
    std::vector<ConditionB> cond_b;  ///< one per hit
    std::string note;
};

struct GrtReport {
    PVResult lhs;  ///< PV of the integral divided by 2 pi i
    Complex rhs;
    std::vector<SingularityReport> per_singularity;
    Verdict verdict = Verdict::LhsInconclusive;
    double discrepancy = 0.0;
    double tolerance = 0.0;
    std::string reason;
};

/// Sum of winding times residue; every declared singularity must be off the trace.
Complex classical_rhs(const AnalyticFunction& f, const Cycle& cycle, const GrtConfig& cfg = {});

ConditionA check_condition_A(const Cycle& cycle, const Singularity& s, const std::vector<Hit>& hits,
                             const GrtConfig& cfg = {});

/// alpha / pi as p / q by continued fractions; throws IrrationalAngle.
RationalAngle rational_angle(double alpha, int q_max = 64, double tol = 1e-8);
/// Indices n in [1, depth] with n = 2kq/p + 1 for an integer k >= 0.
std::vector<int> admissible_indices(RationalAngle angle, int depth);

ConditionB check_condition_B(double alpha, const Singularity& s, const GrtConfig& cfg = {});

GrtReport evaluate(const AnalyticFunction& f, const Cycle& cycle, const GrtConfig& cfg = {});

// --- the improper integral example ------------------------------------------------

/// -cos(z/2) / (z cosh(z/2)) with its pole at 0 and the poles at i pi (2m + 1)
/// for |z| <= reach.
AnalyticFunction sinc_sinh_function(double reach = 200.0);

struct ImproperReport {
    double r = 0.0;
    double estimate = 0.0;  ///< integral of sinc(t) sinh(t) / (cos t + cosh t) over [0, r]
    double bound = 0.0;     ///< half the integral of |f| along the arc leg
    double im_leg1 = 0.0;
    double im_leg2 = 0.0;
    double im_leg3 = 0.0;
    double im_cycle = 0.0;  ///< Im of the closed-cycle integral; exactly -pi/2
    bool identity_holds = false;
};

ImproperReport improper_integral_demo(double r, const QuadratureConfig& cfg = {});

}  // namespace windline
