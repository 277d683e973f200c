#include <doctest.h>

#include <cmath>
#include <random>

#include "support.hpp"
#include "windline/curves.hpp"
#include "windline/error.hpp"
#include "windline/winding.hpp"

using namespace windline;

namespace {

ErrorCode code_of(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("no error thrown");
    return ErrorCode::InvalidInput;
}

}  // namespace

TEST_CASE("integer winding off the curve") {
    const Cycle zep(curves::zeppelin());
    CHECK(winding_off_curve(zep, Complex(-0.1, 0.0)) == 2);
    CHECK(winding_off_curve(zep, Complex(0.1, 0.0)) == 1);
    CHECK(winding_off_curve(zep, Complex(5.0, 0.0)) == 0);
    CHECK(ray_crossing_count(zep, Complex(-0.1, 0.0)) == 2);
    CHECK(ray_crossing_count(zep, Complex(0.1, 0.0)) == 1);

    const Cycle twice(curves::circle(0.0, 1.0), 2);
    CHECK(winding_off_curve(twice, 0.3) == 2);
    CHECK(winding_off_curve(reversed(twice), 0.3) == -2);
    CHECK(code_of([&] { winding_off_curve(twice, 1.0); }) == ErrorCode::PointOnCurve);
}

TEST_CASE("ray crossings agree with polygon angle sums") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    for (int trial = 0; trial < 10; ++trial) {
        // star-shaped but generally non-convex polygon
        std::vector<Complex> v;
        for (int k = 0; k < 7; ++k) v.push_back(std::polar(1.0 + 0.8 * std::abs(u(rng)) / 3.0, kTwoPi * k / 7.0));
        const Cycle poly(curves::polygon(v));
        for (int j = 0; j < 10; ++j) {
            const Complex z(u(rng), u(rng));
            const long oracle = std::lround(testsupport::polygon_winding(v, z));
            CHECK(ray_crossing_count(poly, z) == oracle);
            CHECK(winding_off_curve(poly, z) == oracle);
        }
    }
}

TEST_CASE("zeppelin through its double point") {
    const Cycle zep(curves::zeppelin());
    const auto pv = winding_pv(zep, 0.0);
    const auto bounded = winding_bounded(zep, 0.0);
    const auto geo = winding_geometric(zep, 0.0);
    CHECK(std::abs(pv.value - 1.5) < 1e-8);
    CHECK(std::abs(bounded.value - 1.5) < 1e-8);
    CHECK(std::abs(geo.value - 1.5) < 1e-12);
    CHECK(pv.method == WindingMethod::PV);
    CHECK(pv.imaginary_residue < 1e-8);
    REQUIRE(bounded.guard_values.size() == 1);
    CHECK(bounded.guard_values[0].before == doctest::Approx(0.75).epsilon(1e-6));
    CHECK(bounded.guard_values[0].after == doctest::Approx(0.75).epsilon(1e-6));
    CHECK(geo.integer_part_tilde == 1);
    CHECK(geo.angle_sum == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("the bounded integrand stays bounded near a smooth hit") {
    const auto seg = curves::zeppelin().segment(0);
    double worst = 0.0;
    for (int j = 1; j <= 1000; ++j) {
        const double h = std::pow(10.0, -8.0 * j / 1000.0);
        worst = std::max({worst, std::abs(bounded_integrand(seg, kPi + h, 0.0)),
                          std::abs(bounded_integrand(seg, kPi - h, 0.0))});
    }
    CHECK(worst < 2.0);
    // and tends to half the curvature times the speed
    CHECK(bounded_integrand(seg, kPi + 1e-6, 0.0) == doctest::Approx(0.75).epsilon(1e-4));
}

TEST_CASE("model sectors: winding is alpha / 2 pi") {
    for (double alpha : {0.3, kPi / 2.0, kPi, 4.0, 6.0}) {
        const Cycle sector(curves::model_sector(1.5, alpha));
        const double expect = alpha / kTwoPi;
        CHECK(std::abs(winding_pv(sector, 0.0).value - expect) < 1e-9);
        CHECK(std::abs(winding_bounded(sector, 0.0).value - expect) < 1e-9);
        CHECK(std::abs(winding_geometric(sector, 0.0).value - expect) < 1e-12);
    }
}

TEST_CASE("three methods agree on random line/arc cycles") {
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 12; ++trial) {
        auto rc = testsupport::random_cycle(rng, true);
        const Cycle cyc(rc.curve);
        const auto& arc_seg = rc.curve.segment(0);
        const std::vector<std::pair<Complex, double>> probes = {
            {arc_seg.eval(0.5 * (arc_seg.t0 + arc_seg.t1)), 0.5},
            {rc.vertices[1], testsupport::interior_angle(rc, 1) / kTwoPi},
        };
        for (const auto& [z, expect] : probes) {
            const double a = winding_pv(cyc, z).value;
            const double b = winding_bounded(cyc, z).value;
            const double c = winding_geometric(cyc, z).value;
            CHECK(std::abs(a - expect) < 1e-8);
            CHECK(std::abs(b - expect) < 1e-8);
            CHECK(std::abs(c - expect) < 1e-10);
        }
    }
}

TEST_CASE("half-integer law at smooth points") {
    // the winding at a smooth point is the mean of the windings just to either side
    const Cycle zep(curves::zeppelin());
    const auto seg = curves::zeppelin().segment(0);
    for (double t : {0.4, 1.1, 2.0, 4.5}) {
        const Complex z = seg.eval(t);
        const Complex normal = Complex(0.0, 1.0) * seg.deriv(t) / std::abs(seg.deriv(t));
        const long left = winding_off_curve(zep, z + 1e-3 * normal);
        const long right = winding_off_curve(zep, z - 1e-3 * normal);
        CHECK(left - right == 1);
        CHECK(std::abs(winding_bounded(zep, z).value - 0.5 * (left + right)) < 1e-8);
    }
}

TEST_CASE("orientation and multiplicity") {
    const Cycle sector(curves::model_sector(1.0, 1.0));
    const double w = winding_geometric(sector, 0.0).value;
    CHECK(std::abs(winding_geometric(reversed(sector), 0.0).value + w) < 1e-12);
    CHECK(std::abs(winding_bounded(reversed(sector), 0.0).value + w) < 1e-9);
    CHECK(std::abs(winding_pv(Cycle(curves::model_sector(1.0, 1.0), 3), 0.0).value - 3.0 * w) < 1e-8);
}

TEST_CASE("the detoured cycle avoids the point") {
    const Cycle zep(curves::zeppelin());
    const auto hits = find_hits(zep, 0.0);
    for (double delta : {1e-1, 1e-3}) {
        const Cycle d = detoured_cycle(zep, hits, delta);
        CHECK(find_hits(d, 0.0).empty());
        CHECK(winding_off_curve(d, 0.0) == 1);
        CHECK(std::abs(winding_geometric(zep, 0.0, delta).value - 1.5) < 1e-12);
    }
}

TEST_CASE("winding errors") {
    const Cycle circle(curves::circle(0.0, 1.0));
    const auto hits = find_hits(circle, 1.0);
    CHECK(code_of([&] { detoured_cycle(circle, hits, 0.0); }) == ErrorCode::InvalidInput);
    CHECK(code_of([&] { detoured_cycle(circle, hits, 5.0); }) == ErrorCode::DetourOverlap);

    auto seg = curves::circle(0.0, 1.0).segment(0);
    seg.deriv2.reset();
    QuadratureConfig cfg;
    cfg.geometry.fd_second_derivative = false;
    CHECK(code_of([&] { winding_bounded(Cycle(ClosedCurve({seg})), 1.0, cfg); }) == ErrorCode::NotC11NearHit);
    // the geometric method needs no second derivative
    CHECK(std::abs(winding_geometric(Cycle(ClosedCurve({seg})), 1.0, 0.0, cfg).value - 0.5) < 1e-12);
}
