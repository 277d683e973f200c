#include <doctest.h>

#include <cmath>
#include <cstdlib>

#include "windline/curves.hpp"
#include "windline/error.hpp"
#include "windline/grt.hpp"

using namespace windline;

namespace {

AnalyticFunction make(std::function<Complex(Complex)> fn, std::vector<Complex> where) {
    AnalyticFunction f;
    f.eval = std::move(fn);
    for (Complex z : where) {
        Singularity s;
        s.location = z;
        f.singularities.push_back(s);
    }
    return f;
}

AnalyticFunction power_pole(Complex a, int n) {
    return make([a, n](Complex z) { return std::pow(z - a, -n); }, {a});
}

}  // namespace

TEST_CASE("rational angles") {
    auto same = [](RationalAngle a, int p, int q) { return a.p == p && a.q == q; };
    CHECK(same(rational_angle(kPi / 2.0), 1, 2));
    CHECK(same(rational_angle(kTwoPi / 3.0), 2, 3));
    CHECK(same(rational_angle(kPi), 1, 1));
    CHECK(same(rational_angle(kTwoPi), 2, 1));
    CHECK(same(rational_angle(5.0 * kPi / 7.0), 5, 7));
    try {
        rational_angle(1.0);
        FAIL("expected IrrationalAngle");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::IrrationalAngle);
    }
}

TEST_CASE("admissible indices") {
    CHECK(admissible_indices({1, 2}, 10) == std::vector<int>{1, 5, 9});
    CHECK(admissible_indices({1, 1}, 7) == std::vector<int>{1, 3, 5, 7});
    CHECK(admissible_indices({2, 1}, 4) == std::vector<int>{1, 2, 3, 4});
    CHECK(admissible_indices({2, 3}, 8) == std::vector<int>{1, 4, 7});
}

TEST_CASE("condition B from the principal part") {
    Singularity s;
    s.kind = SingularityKind::Pole;
    s.order = 3;
    s.radius = 1.0;
    s.laurent = {{-3, 1.0}, {-1, 2.0}};
    const auto smooth = check_condition_B(kPi, s);
    CHECK(smooth.ok);
    const auto corner = check_condition_B(kPi / 2.0, s);
    CHECK_FALSE(corner.ok);
    CHECK(corner.offending == std::vector<int>{3});
}

TEST_CASE("condition A on straight and curved pieces") {
    const Cycle sector(curves::model_sector(1.0, kPi / 2.0));
    Singularity s;
    s.kind = SingularityKind::Pole;
    s.order = 3;
    CHECK(check_condition_A(sector, s, find_hits(sector, 0.0)).ok);
    const Cycle circle(curves::circle(0.0, 1.0));
    const auto a = check_condition_A(circle, s, find_hits(circle, 1.0));
    CHECK_FALSE(a.ok);
    CHECK(a.exponent == doctest::Approx(2.0).epsilon(0.05));
}

TEST_CASE("classical right-hand side") {
    const auto f = make([](Complex z) { return 1.0 / (z * z + 1.0); }, {Complex(0.0, 1.0), Complex(0.0, -1.0)});
    CHECK(std::abs(classical_rhs(f, Cycle(curves::circle(0.0, 2.0)))) < 1e-12);
    CHECK(std::abs(classical_rhs(f, Cycle(curves::circle(Complex(0.0, 1.0), 1.0))) - Complex(0.0, -0.5)) < 1e-12);
    CHECK_THROWS_AS(classical_rhs(f, Cycle(curves::circle(0.0, 1.0))), Error);
}

TEST_CASE("verification through smooth points and corners") {
    const Cycle semi(curves::semicircle(1.0));
    const auto r3 = evaluate(power_pole(0.0, 3), semi);
    CHECK(r3.verdict == Verdict::Verified);
    CHECK(r3.discrepancy < 1e-6);
    const auto r2 = evaluate(power_pole(0.0, 2), semi);
    CHECK(r2.verdict == Verdict::ConditionsFailed);

    const Cycle circle(curves::circle(0.0, 1.0));
    const auto r1 = evaluate(power_pole(Complex(0.0, 1.0), 1), circle);
    CHECK(r1.verdict == Verdict::Verified);
    CHECK(std::abs(r1.lhs.value - 0.5) < 1e-8);
    REQUIRE(r1.per_singularity.size() == 1);
    CHECK(r1.per_singularity[0].winding == doctest::Approx(0.5).epsilon(1e-8));
    const auto rc = evaluate(power_pole(Complex(0.0, 1.0), 2), circle);
    CHECK(rc.verdict == Verdict::ConditionsFailed);
    CHECK_FALSE(rc.per_singularity[0].cond_a.ok);

    // simple pole at a corner: winding alpha / 2 pi
    const auto corner = evaluate(power_pole(0.0, 1), Cycle(curves::model_sector(1.0, 1.0)));
    CHECK(corner.verdict == Verdict::Verified);
    CHECK(std::abs(corner.lhs.value - 1.0 / kTwoPi) < 1e-8);
}

TEST_CASE("essential singularities") {
    const auto f = make([](Complex z) { return std::exp(1.0 / z); }, {0.0});
    const auto off = evaluate(f, Cycle(curves::circle(0.0, 1.0)));
    CHECK(off.verdict == Verdict::Verified);
    CHECK(std::abs(off.rhs - 1.0) < 1e-10);
    const auto on = evaluate(f, Cycle(curves::semicircle(1.0)));
    CHECK(on.verdict == Verdict::ConditionsFailed);
}

TEST_CASE("the sinc-sinh function on the quarter contour") {
    const auto f = sinc_sinh_function(30.0);
    const auto report = evaluate(f, Cycle(curves::quarter_contour(20.0)));
    CHECK(report.verdict == Verdict::Verified);
    CHECK(std::abs(report.lhs.value + 0.25) < 1e-7);
    CHECK(std::abs(report.rhs + 0.25) < 1e-12);
    // declared residues against the function itself
    for (const auto& s : f.singularities) {
        if (std::abs(s.location) > 12.0) continue;
        CHECK(std::abs(residue(f, s.location, 0.5) - *s.residue) < 1e-9);
    }
}

TEST_CASE("the improper integral estimate") {
    double previous = 1e300;
    for (double r : {10.0, 20.0, 40.0}) {
        const auto d = improper_integral_demo(r);
        CHECK(d.identity_holds);
        CHECK(std::abs(d.im_cycle + kPi / 2.0) < 1e-8);
        CHECK(std::abs(d.im_leg1 + d.im_leg2 - d.im_leg3 - d.im_cycle) < 1e-12);
        CHECK(std::abs(d.estimate - kPi / 4.0) <= d.bound);
        CHECK(d.bound < previous);
        previous = d.bound;
    }
}

TEST_CASE("results do not depend on the worker count") {
    std::vector<Complex> where = {0.0, Complex(0.3, 0.2), Complex(-0.4, 0.1), Complex(2.0, 0.0)};
    const auto f = make(
        [where](Complex z) {
            Complex v = 0.0;
            for (std::size_t k = 0; k < where.size(); ++k) v += static_cast<double>(k + 1) / (z - where[k]);
            return v;
        },
        where);
    const Cycle semi(curves::semicircle(1.0));
    setenv("WINDLINE_THREADS", "1", 1);
    const auto serial = evaluate(f, semi);
    setenv("WINDLINE_THREADS", "4", 1);
    const auto threaded = evaluate(f, semi);
    unsetenv("WINDLINE_THREADS");
    CHECK(serial.verdict == Verdict::Verified);
    CHECK(serial.lhs.value == threaded.lhs.value);
    CHECK(serial.rhs == threaded.rhs);
    REQUIRE(serial.per_singularity.size() == threaded.per_singularity.size());
    for (std::size_t i = 0; i < serial.per_singularity.size(); ++i) {
        CHECK(serial.per_singularity[i].winding == threaded.per_singularity[i].winding);
        CHECK(*serial.per_singularity[i].singularity.residue == *threaded.per_singularity[i].singularity.residue);
    }
}
