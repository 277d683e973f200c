#include <doctest.h>

#include <cmath>
#include <random>

#include "windline/error.hpp"
#include "windline/expr.hpp"

using namespace windline;

namespace {

ErrorCode parse_code(const std::string& text) {
    try {
        parse(text);
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("no error for " << text);
    return ErrorCode::InvalidInput;
}

Expr random_expr(std::mt19937_64& rng, int depth) {
    std::uniform_int_distribution<int> pick(0, depth <= 0 ? 2 : 10);
    std::uniform_real_distribution<double> num(0.1, 3.0);
    static const char* fns[] = {"sin", "cos", "exp", "sinh", "cosh", "sinc", "tanh"};
    const Expr z = Expr::var("z");
    switch (pick(rng)) {
        case 0:
        case 1: return z;
        case 2: return Expr::number(std::round(num(rng) * 100.0) / 100.0);
        case 3: return random_expr(rng, depth - 1) + random_expr(rng, depth - 1);
        case 4: return random_expr(rng, depth - 1) - random_expr(rng, depth - 1);
        case 5: return random_expr(rng, depth - 1) * random_expr(rng, depth - 1);
        case 6: return random_expr(rng, depth - 1) / (Expr::number(3.0) + Expr::call("exp", random_expr(rng, depth - 1)));
        case 7: return pow(random_expr(rng, depth - 1), Expr::number(static_cast<double>(2 + rng() % 3)));
        case 8: return -random_expr(rng, depth - 1);
        default: return Expr::call(fns[rng() % 7], random_expr(rng, depth - 1));
    }
}

}  // namespace

TEST_CASE("precedence and associativity") {
    CHECK(parse("1+2*3^2")(0.0) == Complex(19.0, 0.0));
    CHECK(parse("2^3^2")(0.0).real() == doctest::Approx(512.0));
    CHECK(parse("-2^2")(0.0).real() == doctest::Approx(-4.0));
    CHECK(parse("8/4/2")(0.0).real() == doctest::Approx(1.0));
    CHECK(parse("1-2-3")(0.0).real() == doctest::Approx(-4.0));
    CHECK(parse("2^-1")(0.0).real() == doctest::Approx(0.5));
    CHECK(std::abs(parse("i*i")(0.0) + 1.0) < 1e-15);
    CHECK(std::abs(parse("e^(i*pi)")(0.0) + 1.0) < 1e-15);
    CHECK(parse("1.5e2")(0.0).real() == 150.0);
    CHECK(parse("sinc(z)")(0.0) == Complex(1.0, 0.0));
    CHECK(std::abs(parse("z^3")(Complex(1.0, 1.0)) - Complex(-2.0, 2.0)) < 1e-14);
}

TEST_CASE("parse builds the same tree as the builders") {
    const Expr z = Expr::var("z");
    const Expr built = Expr::number(1.0) + Expr::number(2.0) * pow(z, Expr::number(2.0));
    CHECK(parse("1+2*z^2").same_as(built));
    CHECK(parse("sin(z)/(z-pi)").same_as(Expr::call("sin", z) / (z - Expr::pi())));
    CHECK(parse("-z*i").same_as((-z) * Expr::imaginary_unit()));
    CHECK_FALSE(parse("z+1").same_as(parse("1+z")));
}

TEST_CASE("derivatives") {
    CHECK(std::abs(parse("z^3").derivative()(2.0) - 12.0) < 1e-13);
    CHECK(std::abs(differentiate(parse("exp(2*z)"))(0.5) - 2.0 * std::exp(1.0)) < 1e-13);
    CHECK(std::abs(parse("log(z)").derivative()(4.0) - 0.25) < 1e-15);
    CHECK(std::abs(parse("sqrt(z)").derivative()(4.0) - 0.25) < 1e-15);
    CHECK(std::abs(parse("tan(z)").derivative()(0.0) - 1.0) < 1e-15);
    const std::string d2 = parse("sinc(z)").derivative().derivative().str();
    CHECK(d2.find("sinc_d2") != std::string::npos);
    CHECK(std::abs(parse(d2)(0.0) + 1.0 / 3.0) < 1e-15);
}

TEST_CASE("sinc derivatives against series and finite differences") {
    // series at 0: sinc^(2m)(0) = (-1)^m / (2m+1), odd derivatives vanish
    for (int m = 0; m < 5; ++m) {
        CHECK(std::abs(sinc_derivative(0.0, 2 * m) - (m % 2 ? -1.0 : 1.0) / (2.0 * m + 1.0)) < 1e-15);
        CHECK(std::abs(sinc_derivative(0.0, 2 * m + 1)) < 1e-15);
    }
    // both branches agree with differences of the next-lower order
    for (Complex w : {Complex(0.3, 0.2), Complex(1.9, -0.4), Complex(5.0, 1.0)}) {
        for (int k = 0; k < 4; ++k) {
            const double h = 1e-5;
            const Complex fd = (sinc_derivative(w + h, k) - sinc_derivative(w - h, k)) / (2.0 * h);
            CHECK(std::abs(sinc_derivative(w, k + 1) - fd) < 1e-8);
        }
    }
    CHECK(std::abs(sinc_derivative(Complex(2.0, 0.0), 0) - std::sin(2.0) / 2.0) < 1e-16);
}

TEST_CASE("symbolic derivatives of random expressions match finite differences") {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    int checked = 0;
    for (int n = 0; n < 100; ++n) {
        const Expr e = random_expr(rng, 3);
        const Expr d = e.derivative();
        for (int j = 0; j < 10; ++j) {
            const Complex z(u(rng), u(rng));
            const Complex exact = d(z);
            const double h = 1e-5;
            const Complex fd1 = (e(z + h) - e(z - h)) / (2.0 * h);
            const Complex fd2 = (e(z + Complex(0.0, h)) - e(z - Complex(0.0, h))) / Complex(0.0, 2.0 * h);
            if (!std::isfinite(std::abs(exact)) || std::abs(e(z)) > 1e6) continue;
            const double tol = 1e-5 * (1.0 + std::abs(exact));
            CHECK(std::abs(exact - fd1) < tol);
            CHECK(std::abs(exact - fd2) < tol);
            ++checked;
        }
    }
    CHECK(checked > 800);
}

TEST_CASE("printing round-trips") {
    std::mt19937_64 rng(5);
    for (int n = 0; n < 200; ++n) {
        const Expr e = random_expr(rng, 4);
        const Expr back = parse(print(e));
        CHECK(back.same_as(e));
        CHECK(print(back) == print(e));
        CHECK(print(parse(print(e.derivative()))) == print(e.derivative()));
    }
    CHECK(parse(print(Expr::number(0.1))).same_as(Expr::number(0.1)));
}

TEST_CASE("parse errors") {
    CHECK(parse_code("2z") == ErrorCode::SyntaxError);
    CHECK(parse_code("sin(z") == ErrorCode::SyntaxError);
    CHECK(parse_code("") == ErrorCode::SyntaxError);
    CHECK(parse_code("1 +") == ErrorCode::SyntaxError);
    CHECK(parse_code("z + t") == ErrorCode::SyntaxError);
    CHECK(parse_code("q + 1") == ErrorCode::SyntaxError);
    CHECK(parse_code("foo(z)") == ErrorCode::UnknownFunction);
    CHECK(parse_code("conj(z)") == ErrorCode::NonHolomorphic);
    CHECK(parse_code("abs(z)") == ErrorCode::NonHolomorphic);
    try {
        parse("1 + * 2");
    } catch (const ParseError& e) {
        CHECK(e.position() == 4);
    }
}

TEST_CASE("curves and functions from expressions") {
    const auto seg = segment_from_expr(parse("cos(t)+cos(2*t)"), parse("sin(2*t)"), 0.0, 2.0 * M_PI);
    REQUIRE(seg.deriv2.has_value());
    CHECK(std::abs((*seg.deriv2)(M_PI).real() + 3.0) < 1e-14);
    CHECK(std::abs(seg.eval(M_PI)) < 1e-15);
    CHECK(std::abs(seg.deriv(M_PI) - Complex(0.0, 2.0)) < 1e-14);

    const auto circle = segment_from_expr(parse("exp(i*t)"), Expr(), 0.0, 1.0);
    CHECK(std::abs(circle.deriv(0.0) - Complex(0.0, 1.0)) < 1e-15);

    const auto f = function_from_expr(parse("1/(z-1)"));
    CHECK(std::abs(f(3.0) - 0.5) < 1e-15);
}
