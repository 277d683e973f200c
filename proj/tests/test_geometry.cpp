#include <doctest.h>

#include <cmath>
#include <random>

#include "support.hpp"
#include "windline/curves.hpp"
#include "windline/error.hpp"
#include "windline/geometry.hpp"

using namespace windline;

namespace {

Segment cubic_piece() {
    Segment s;
    s.t0 = -1.0;
    s.t1 = 1.0;
    s.eval = [](double t) { return Complex(t * t * t, 0.0); };
    s.deriv = [](double t) { return Complex(3.0 * t * t, 0.0); };
    return s;
}

}  // namespace

TEST_CASE("hits on the unit circle and the zeppelin") {
    const Cycle circle(curves::circle(0.0, 1.0));
    auto hits = find_hits(circle, Complex(1.0, 0.0));
    REQUIRE(hits.size() == 1);
    CHECK(hits[0].t_star == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(std::abs(hits[0].alpha - kPi) < 1e-9);

    CHECK(find_hits(circle, Complex(3.0, 0.0)).empty());

    const Cycle zep(curves::zeppelin());
    hits = find_hits(zep, 0.0);
    REQUIRE(hits.size() == 1);
    CHECK(std::abs(hits[0].t_star - kPi) < 1e-9);
    CHECK(std::abs(hits[0].tangent_in) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(hits[0].tangent_out) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("corner angles") {
    const Cycle quarter(curves::quarter_contour(20.0));
    auto hits = find_hits(quarter, 0.0);
    REQUIRE(hits.size() == 1);
    CHECK(std::abs(corner_angle(hits[0]) - kPi / 2.0) < 1e-9);
    CHECK(hits[0].at_breakpoint);

    const Cycle sector(curves::model_sector(1.0, kTwoPi / 3.0));
    hits = find_hits(sector, 0.0);
    REQUIRE(hits.size() == 1);
    CHECK(std::abs(hits[0].alpha - kTwoPi / 3.0) < 1e-9);

    CHECK(std::abs(corner_angle(Complex(-1.0, 0.0), Complex(1.0, 0.0)) - kPi) < 1e-15);
}

TEST_CASE("corner angle is invariant under rotation and translation") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 10; ++trial) {
        auto rc = testsupport::random_cycle(rng);
        const Cycle base(rc.curve);
        const Complex a = std::polar(1.0, 0.3 + trial);
        const Complex b(0.5 * trial, -1.0);
        const Cycle moved = transformed(base, a, b);
        const auto h0 = find_hits(base, rc.vertices[1]);
        const auto h1 = find_hits(moved, a * rc.vertices[1] + b);
        REQUIRE(h0.size() == 1);
        REQUIRE(h1.size() == 1);
        CHECK(std::abs(h0[0].alpha - h1[0].alpha) < 1e-12);
        CHECK(std::abs(h0[0].alpha - testsupport::interior_angle(rc, 1)) < 1e-9);
    }
}

TEST_CASE("smooth hits have angle pi") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 10; ++trial) {
        auto rc = testsupport::random_cycle(rng);
        const auto& seg = rc.curve.segment(0);
        const auto hits = find_hits(Cycle(rc.curve), seg.eval(0.37 * seg.t1 + 0.63 * seg.t0));
        REQUIRE(hits.size() == 1);
        CHECK(std::abs(hits[0].alpha - kPi) < 1e-9);
        CHECK_FALSE(hits[0].at_breakpoint);
    }
}

TEST_CASE("signed curvature") {
    const auto circle = curves::circle(Complex(0.3, -0.2), 2.5);
    for (double t : {0.0, 1.0, 2.0, 5.0}) CHECK(signed_curvature(circle.segment(0), t) == doctest::Approx(0.4).epsilon(1e-12));
    const auto cw = curves::circle(0.0, 2.0, false);
    CHECK(signed_curvature(cw.segment(0), 1.0) == doctest::Approx(-0.5).epsilon(1e-12));
    CHECK(std::abs(signed_curvature(curves::line(0.0, Complex(1.0, 2.0)), 0.5)) < 1e-12);

    // zeppelin at t = pi against central differences of the position
    const auto zep = curves::zeppelin().segment(0);
    const double h = 1e-4;
    const double t = kPi;
    const Complex v = (zep.eval(t + h) - zep.eval(t - h)) / (2.0 * h);
    const Complex acc = (zep.eval(t + h) - 2.0 * zep.eval(t) + zep.eval(t - h)) / (h * h);
    const double oracle = std::imag(std::conj(v) * acc) / std::pow(std::abs(v), 3);
    CHECK(oracle == doctest::Approx(0.75).epsilon(1e-6));
    CHECK(signed_curvature(zep, t) == doctest::Approx(oracle).epsilon(1e-6));
}

TEST_CASE("signed curvature matches finite differences on analytic curves") {
    std::vector<Segment> samples = {curves::zeppelin().segment(0), curves::arc(Complex(1.0, 1.0), 0.7, 0.2, 2.0),
                                    curves::quarter_contour(3.0).segment(1)};
    for (const auto& seg : samples) {
        for (int j = 1; j < 10; ++j) {
            const double t = seg.t0 + seg.length() * j / 10.0;
            const double h = 1e-4 * seg.length();
            const Complex v = (seg.eval(t + h) - seg.eval(t - h)) / (2.0 * h);
            const Complex acc = (seg.eval(t + h) - 2.0 * seg.eval(t) + seg.eval(t - h)) / (h * h);
            const double oracle = std::imag(std::conj(v) * acc) / std::pow(std::abs(v), 3);
            CHECK(signed_curvature(seg, t) == doctest::Approx(oracle).epsilon(1e-6));
        }
    }
}

TEST_CASE("second derivative fallback") {
    auto seg = curves::zeppelin().segment(0);
    const Complex exact = (*seg.deriv2)(1.3);
    seg.deriv2.reset();
    CHECK(std::abs(second_derivative(seg, 1.3) - exact) < 1e-6);
    CHECK_THROWS_AS(second_derivative(seg, 1.3, false), Error);
    try {
        signed_curvature(seg, 1.3, false);
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::MissingSecondDerivative);
    }
}

TEST_CASE("flatness order") {
    // a corner between straight pieces is flat of every order
    const ClosedCurve sector = curves::model_sector(1.0, kPi / 2.0);
    const auto corner = find_hits(Cycle(sector), 0.0).at(0);
    for (int n : {1, 2, 3, 7}) CHECK(flatness_order(sector, corner, n).flat);

    // a circle deviates from its tangent by r^2 / (2R): exponent 2, not flat of order 2
    const double R = 1.5;
    const ClosedCurve circle = curves::circle(Complex(0.0, R), R);
    const auto hit = find_hits(Cycle(circle), 0.0).at(0);
    const auto res = flatness_order(circle, hit, 2);
    CHECK_FALSE(res.flat);
    CHECK(res.exponent() == doctest::Approx(2.0).epsilon(0.05));
    CHECK(flatness_order(circle, hit, 1).flat);

    // the closed-form distance really has slope 2
    const double s1 = 1e-2;
    const double s2 = 1e-3;
    auto dist = [R](double s) { return R * (1.0 - std::cos(s / R)); };
    auto chord = [R](double s) { return 2.0 * R * std::sin(s / (2.0 * R)); };
    const double slope = std::log(dist(s1) / dist(s2)) / std::log(chord(s1) / chord(s2));
    CHECK(slope == doctest::Approx(2.0).epsilon(1e-4));
    CHECK(dist(s2) == doctest::Approx(chord(s2) * chord(s2) / (2.0 * R)).epsilon(1e-6));
}

TEST_CASE("every hit is flat of order one") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 8; ++trial) {
        auto rc = testsupport::random_cycle(rng);
        for (const Complex z : {rc.vertices[0], rc.curve.segment(1).eval(0.5)}) {
            const auto hits = find_hits(Cycle(rc.curve), z);
            REQUIRE(hits.size() == 1);
            CHECK(flatness_order(rc.curve, hits[0], 1).flat);
        }
    }
}

TEST_CASE("immersion validation") {
    const auto report = validate_immersion(Cycle(curves::circle(0.0, 1.0)));
    CHECK(report.ok);
    CHECK(report.min_speed == doctest::Approx(1.0).epsilon(1e-12));

    // t^3 glued to a return arc: speed vanishes at t = 0
    const ClosedCurve cubic({cubic_piece(), curves::arc(0.0, 1.0, 0.0, kPi)});
    try {
        validate_immersion(Cycle(cubic));
        FAIL("expected NonImmersion");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::NonImmersion);
    }

    // zeppelin: the sampled minimum speed is bounded below by a dense grid search
    const auto zep = validate_immersion(Cycle(curves::zeppelin()));
    double dense = 1e300;
    const auto seg = curves::zeppelin().segment(0);
    for (int j = 0; j <= 200000; ++j) dense = std::min(dense, std::abs(seg.deriv(kTwoPi * j / 200000.0)));
    CHECK(zep.ok);
    CHECK(zep.min_speed >= dense - 1e-12);
    CHECK(zep.min_speed <= dense * 1.05);

    // broken join
    const ClosedCurve broken({curves::line(0.0, 1.0), curves::line(Complex(1.0, 0.1), 0.0)});
    CHECK_THROWS_AS(validate_immersion(Cycle(broken)), Error);
}

TEST_CASE("hit errors") {
    GeometryConfig cfg;
    cfg.max_hits = 0;
    try {
        find_hits(Cycle(curves::zeppelin()), 0.0, cfg);
        FAIL("expected TooManyHits");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::TooManyHits);
    }

    // a piece that rests at the query point for a whole interval
    Segment stay;
    stay.t0 = 0.0;
    stay.t1 = 1.0;
    stay.eval = [](double t) { return t < 0.5 ? Complex(0.0, 0.0) : Complex(t - 0.5, 0.0); };
    stay.deriv = [](double) { return Complex(1.0, 0.0); };
    const ClosedCurve resting({stay, curves::arc(Complex(0.25, 0.0), 0.25, 0.0, kPi)});
    try {
        find_hits(Cycle(resting), 0.0);
        FAIL("expected NonImmersion");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::NonImmersion);
    }
}

TEST_CASE("reversal swaps the tangents") {
    const Cycle quarter(curves::quarter_contour(2.0));
    const auto fwd = find_hits(quarter, 0.0).at(0);
    const auto back = find_hits(reversed(quarter), 0.0).at(0);
    CHECK(std::abs(fwd.tangent_in - back.tangent_out) < 1e-12);
    CHECK(std::abs(fwd.tangent_out - back.tangent_in) < 1e-12);
    CHECK(std::abs(fwd.alpha + back.alpha - kTwoPi) < 1e-12);
}
