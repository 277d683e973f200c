#pragma once

#include <complex>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "windline/geometry.hpp"

namespace windline {

enum class SingularityKind { Unknown, Removable, Pole, EssentialTruncated };

std::string_view to_string(SingularityKind kind);

/// Laurent data at an isolated singularity. `laurent` maps the power k to the
/// coefficient a_k of (z - location)^k, so the principal part lives at k < 0
/// and the residue is laurent[-1].
struct Singularity {
    Complex location;
    SingularityKind kind = SingularityKind::Unknown;
    int order = 0;  ///< pole order; 0 when removable, truncation depth when essential
    std::map<int, Complex> laurent;
    std::optional<Complex> residue;
    double radius = 0.0;  ///< extraction radius the coefficients came from

    /// Negative-power indices n (term a_{-n} / (z - z0)^n) with a nonzero coefficient.
    std::vector<int> principal_indices(double zero_threshold = 1e-10) const;
};

/// Holomorphic map on the plane minus the declared singularities.
struct AnalyticFunction {
    std::function<Complex(Complex)> eval;
    std::vector<Singularity> singularities;
    std::string label;

    Complex operator()(Complex z) const { return eval(z); }
};

struct LaurentConfig {
    std::size_t samples_start = 64;
    std::size_t samples_max = 8192;
    double coeff_tol = 1e-10;
    double zero_threshold = 1e-10;
    int classify_depth = 24;
    double fallback_radius = 0.5;
};

/// Half the distance to the nearest other declared singularity, or the fallback.
double default_radius(const AnalyticFunction& f, Complex z0, const LaurentConfig& cfg = {});

/// Coefficients a_k for k in [k_lo, k_hi] by trapezoidal sampling of the
/// circle |z - z0| = radius, doubling the sample count until two successive
/// coefficient sets agree.
std::map<int, Complex> laurent_coeffs(const AnalyticFunction& f, Complex z0, double radius, int k_lo, int k_hi,
                                      const LaurentConfig& cfg = {});

Singularity classify(const AnalyticFunction& f, Complex z0, double radius, const LaurentConfig& cfg = {});
Singularity classify(const AnalyticFunction& f, Complex z0, const LaurentConfig& cfg = {});

Complex residue(const AnalyticFunction& f, Complex z0, double radius, const LaurentConfig& cfg = {});
Complex residue(const AnalyticFunction& f, Complex z0, const LaurentConfig& cfg = {});

/// Uses declared kind/order/residue where present and fills the rest numerically.
Singularity resolve(const AnalyticFunction& f, const Singularity& declared, const LaurentConfig& cfg = {});

}  // namespace windline
