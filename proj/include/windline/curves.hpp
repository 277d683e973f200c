#pragma once

#include "windline/geometry.hpp"

namespace windline::curves {

/// Straight piece from a to b, t in [0, 1].
Segment line(Complex a, Complex b);

/// Circular arc center + radius e^{i theta}, theta running linearly from
/// theta0 to theta1 over t in [0, 1]. theta1 < theta0 gives a clockwise arc.
Segment arc(Complex center, double radius, double theta0, double theta1);

/// Full circle as a single segment on [0, 2pi].
ClosedCurve circle(Complex center, double radius, bool counterclockwise = true);

/// Closed polygon through the given vertices.
ClosedCurve polygon(const std::vector<Complex>& vertices);

/// Radius [0, r], arc of opening alpha, and the returning ray into the origin.
ClosedCurve model_sector(double r, double alpha);

/// Diameter [c - R, c + R] followed by the upper half circle.
ClosedCurve semicircle(double radius, Complex center = 0.0);

/// t - it on [0, r], the arc sqrt(2) r e^{it} on [-pi/4, pi/4], and t + it
/// traversed backwards: the quarter-plane contour with a right-angle corner at 0.
ClosedCurve quarter_contour(double r);

/// cos t + cos 2t + i sin 2t on [0, 2pi]; passes through 0 once, at t = pi.
ClosedCurve zeppelin();

}  // namespace windline::curves
