#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <functional>

namespace windline {

/// 7-point Gauss / 15-point Kronrod pair on [-1, 1]. Abscissae are listed
/// from the outermost node inwards; the last Kronrod node is the origin.
struct GaussKronrod15 {
    static const std::array<double, 8> kronrod_nodes;
    static const std::array<double, 8> kronrod_weights;
    static const std::array<double, 4> gauss_weights;  ///< at kronrod_nodes[1], [3], [5], [7]
};

struct QuadratureResult {
    std::complex<double> value;
    double error = 0.0;
    double gross = 0.0;  ///< integral of |f|, used as a rounding-noise scale
    std::size_t intervals = 0;
    bool converged = false;
    bool finite = true;
};

/// Globally adaptive Gauss-Kronrod quadrature of a complex-valued integrand.
/// Stops when the summed error estimate is at most max(abs_tol, rel_tol |I|),
/// or when max_intervals is reached (converged = false).
QuadratureResult integrate_adaptive(const std::function<std::complex<double>(double)>& f, double a, double b,
                                    double abs_tol, double rel_tol, std::size_t max_intervals);

/// Single non-adaptive 15-point Kronrod application.
std::complex<double> kronrod15(const std::function<std::complex<double>(double)>& f, double a, double b);

}  // namespace windline
