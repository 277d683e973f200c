#pragma once

// Random line/arc cycles and small oracles shared by the unit and acceptance tests.

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "windline/curves.hpp"
#include "windline/geometry.hpp"

namespace testsupport {

using windline::Complex;
using windline::kPi;
using windline::kTwoPi;

/// Convex polygon inscribed in a circle; some edges replaced by outward arcs.
struct RandomCycle {
    windline::ClosedCurve curve;
    std::vector<Complex> vertices;
    std::vector<bool> arc;  ///< edge k (vertex k to k + 1) is an arc
    Complex center;
    double radius = 1.0;
};

inline windline::Segment outward_arc(Complex p, Complex q, double bulge) {
    const double half = std::abs(q - p) / 2.0;
    const double r = half / std::sin(bulge / 2.0);
    const Complex left = Complex(0.0, 1.0) * (q - p) / std::abs(q - p);
    const Complex c = 0.5 * (p + q) + left * r * std::cos(bulge / 2.0);
    const double theta = std::arg(p - c);
    return windline::curves::arc(c, r, theta, theta + bulge);
}

inline RandomCycle random_cycle(std::mt19937_64& rng, bool force_arc = false) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    RandomCycle rc;
    std::vector<double> angles;
    for (;;) {
        const int n = 3 + static_cast<int>(u(rng) * 4.0);
        angles.clear();
        for (int k = 0; k < n; ++k) angles.push_back(kTwoPi * u(rng));
        std::sort(angles.begin(), angles.end());
        double min_gap = kTwoPi;
        double max_gap = 0.0;
        for (std::size_t k = 0; k < angles.size(); ++k) {
            const double next = k + 1 < angles.size() ? angles[k + 1] : angles[0] + kTwoPi;
            min_gap = std::min(min_gap, next - angles[k]);
            max_gap = std::max(max_gap, next - angles[k]);
        }
        if (min_gap > 0.5 && max_gap < kPi - 0.3) break;
    }
    rc.center = Complex(2.0 * u(rng) - 1.0, 2.0 * u(rng) - 1.0);
    rc.radius = 1.0 + u(rng);
    for (double a : angles) rc.vertices.push_back(rc.center + std::polar(rc.radius, a));
    std::vector<windline::Segment> segs;
    const std::size_t n = rc.vertices.size();
    for (std::size_t k = 0; k < n; ++k) {
        const Complex p = rc.vertices[k];
        const Complex q = rc.vertices[(k + 1) % n];
        const bool arc = (force_arc && k == 0) || u(rng) < 0.5;
        rc.arc.push_back(arc);
        segs.push_back(arc ? outward_arc(p, q, 0.3 + 0.6 * u(rng)) : windline::curves::line(p, q));
    }
    rc.curve = windline::ClosedCurve(std::move(segs));
    return rc;
}

/// Interior angle at vertex k from the adjacent segment velocities.
inline double interior_angle(const RandomCycle& rc, std::size_t k) {
    const std::size_t n = rc.curve.size();
    const auto& in = rc.curve.segment((k + n - 1) % n);
    const auto& out = rc.curve.segment(k);
    const double turn = std::arg(out.deriv(out.t0) / in.deriv(in.t1));
    return kPi - turn;
}

/// Winding of a closed polygon by summing the angles subtended by its edges.
inline double polygon_winding(const std::vector<Complex>& v, Complex z) {
    double total = 0.0;
    for (std::size_t k = 0; k < v.size(); ++k) total += std::arg((v[(k + 1) % v.size()] - z) / (v[k] - z));
    return total / kTwoPi;
}

}  // namespace testsupport
