#include "windline/curves.hpp"

#include <cmath>

#include "windline/error.hpp"

namespace windline::curves {

namespace {
constexpr Complex kI{0.0, 1.0};
}

Segment line(Complex a, Complex b) {
    if (a == b) throw Error(ErrorCode::InvalidInput, "line segment with coincident endpoints");
    const Complex d = b - a;
    Segment seg;
    seg.t0 = 0.0;
    seg.t1 = 1.0;
    seg.eval = [a, d](double t) { return a + t * d; };
    seg.deriv = [d](double) { return d; };
    seg.deriv2 = [](double) { return Complex(0.0); };
    return seg;
}

Segment arc(Complex center, double radius, double theta0, double theta1) {
    if (!(radius > 0.0) || theta0 == theta1) throw Error(ErrorCode::InvalidInput, "degenerate arc");
    const double span = theta1 - theta0;
    Segment seg;
    seg.t0 = 0.0;
    seg.t1 = 1.0;
    seg.eval = [=](double t) { return center + std::polar(radius, theta0 + t * span); };
    seg.deriv = [=](double t) { return kI * span * std::polar(radius, theta0 + t * span); };
    seg.deriv2 = [=](double t) { return -span * span * std::polar(radius, theta0 + t * span); };
    return seg;
}

ClosedCurve circle(Complex center, double radius, bool counterclockwise) {
    if (!(radius > 0.0)) throw Error(ErrorCode::InvalidInput, "circle radius must be positive");
    const double sgn = counterclockwise ? 1.0 : -1.0;
    Segment seg;
    seg.t0 = 0.0;
    seg.t1 = kTwoPi;
    seg.eval = [=](double t) { return center + std::polar(radius, sgn * t); };
    seg.deriv = [=](double t) { return sgn * kI * std::polar(radius, sgn * t); };
    seg.deriv2 = [=](double t) { return -std::polar(radius, sgn * t); };
    return ClosedCurve({seg});
}

ClosedCurve polygon(const std::vector<Complex>& vertices) {
    if (vertices.size() < 3) throw Error(ErrorCode::InvalidInput, "polygon needs at least three vertices");
    std::vector<Segment> segs;
    for (std::size_t i = 0; i < vertices.size(); ++i) {
        segs.push_back(line(vertices[i], vertices[(i + 1) % vertices.size()]));
    }
    return ClosedCurve(std::move(segs));
}

ClosedCurve model_sector(double r, double alpha) {
    if (!(r > 0.0)) throw Error(ErrorCode::InvalidInput, "sector radius must be positive");
    if (!(alpha > 0.0 && alpha <= kTwoPi)) throw Error(ErrorCode::InvalidInput, "sector angle must lie in (0, 2pi]");
    const Complex dir = std::polar(1.0, alpha);

    Segment ray_out;
    ray_out.t0 = 0.0;
    ray_out.t1 = r;
    ray_out.eval = [](double t) { return Complex(t, 0.0); };
    ray_out.deriv = [](double) { return Complex(1.0, 0.0); };
    ray_out.deriv2 = [](double) { return Complex(0.0); };

    Segment rim;
    rim.t0 = 0.0;
    rim.t1 = alpha;
    rim.eval = [r](double t) { return std::polar(r, t); };
    rim.deriv = [r](double t) { return kI * std::polar(r, t); };
    rim.deriv2 = [r](double t) { return -std::polar(r, t); };

    Segment ray_back;
    ray_back.t0 = 0.0;
    ray_back.t1 = r;
    ray_back.eval = [r, dir](double t) { return (r - t) * dir; };
    ray_back.deriv = [dir](double) { return -dir; };
    ray_back.deriv2 = [](double) { return Complex(0.0); };

    return ClosedCurve({ray_out, rim, ray_back});
}

ClosedCurve semicircle(double radius, Complex center) {
    return ClosedCurve({line(center - radius, center + radius), arc(center, radius, 0.0, kPi)});
}

ClosedCurve quarter_contour(double r) {
    if (!(r > 0.0)) throw Error(ErrorCode::InvalidInput, "contour radius must be positive");
    const Complex down{1.0, -1.0};
    const Complex up{1.0, 1.0};

    Segment lower;
    lower.t0 = 0.0;
    lower.t1 = r;
    lower.eval = [down](double t) { return t * down; };
    lower.deriv = [down](double) { return down; };
    lower.deriv2 = [](double) { return Complex(0.0); };

    const double rho = std::sqrt(2.0) * r;
    Segment rim;
    rim.t0 = -kPi / 4.0;
    rim.t1 = kPi / 4.0;
    rim.eval = [rho](double t) { return std::polar(rho, t); };
    rim.deriv = [rho](double t) { return kI * std::polar(rho, t); };
    rim.deriv2 = [rho](double t) { return -std::polar(rho, t); };

    Segment upper_back;
    upper_back.t0 = 0.0;
    upper_back.t1 = r;
    upper_back.eval = [r, up](double t) { return (r - t) * up; };
    upper_back.deriv = [up](double) { return -up; };
    upper_back.deriv2 = [](double) { return Complex(0.0); };

    return ClosedCurve({lower, rim, upper_back});
}

ClosedCurve zeppelin() {
    Segment seg;
    seg.t0 = 0.0;
    seg.t1 = kTwoPi;
    seg.eval = [](double t) { return Complex(std::cos(t) + std::cos(2.0 * t), std::sin(2.0 * t)); };
    seg.deriv = [](double t) { return Complex(-std::sin(t) - 2.0 * std::sin(2.0 * t), 2.0 * std::cos(2.0 * t)); };
    seg.deriv2 = [](double t) {
        return Complex(-std::cos(t) - 4.0 * std::cos(2.0 * t), -4.0 * std::sin(2.0 * t));
    };
    return ClosedCurve({seg});
}

}  // namespace windline::curves
