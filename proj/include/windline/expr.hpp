#pragma once

#include <memory>
#include <string>
#include <string_view>

#include "windline/geometry.hpp"

namespace windline {

/// Immutable expression tree over one complex variable.
///
/// Grammar: numbers (decimal or scientific), constants pi, e, i, the free
/// variable, + - * / ^ (right associative), unary minus, parentheses and the
/// functions sin cos tan sinh cosh tanh exp log sqrt sinc. sinc_dK(w) is the
/// K-th derivative of sinc; it appears in derivatives and is accepted on input.
class Expr {
public:
    enum class Kind { Number, ImagUnit, Pi, E, Variable, Neg, Add, Sub, Mul, Div, Pow, Call };
    struct Node;

    Expr() = default;

    Complex operator()(Complex x) const;
    std::string str() const;
    Expr derivative() const;
    /// Structural equality.
    bool same_as(const Expr& other) const;

    const std::string& variable() const { return var_; }
    bool empty() const { return !root_; }

    static Expr number(double v, std::string var = "z");
    static Expr imaginary_unit(std::string var = "z");
    static Expr pi(std::string var = "z");
    static Expr euler(std::string var = "z");
    static Expr var(std::string name);
    static Expr call(const std::string& fn, const Expr& arg);

    friend Expr operator-(const Expr& a);
    friend Expr operator+(const Expr& a, const Expr& b);
    friend Expr operator-(const Expr& a, const Expr& b);
    friend Expr operator*(const Expr& a, const Expr& b);
    friend Expr operator/(const Expr& a, const Expr& b);
    friend Expr pow(const Expr& a, const Expr& b);

    std::shared_ptr<const Node> root() const { return root_; }
    Expr(std::shared_ptr<const Node> root, std::string var) : root_(std::move(root)), var_(std::move(var)) {}

private:
    std::shared_ptr<const Node> root_;
    std::string var_ = "z";
};

struct Expr::Node {
    Kind kind = Kind::Number;
    double value = 0.0;  // Number
    std::string name;    // Call: function name
    int order = 0;       // Call sinc_dK: K
    std::shared_ptr<const Node> a;
    std::shared_ptr<const Node> b;
};

/// variable empty: accept z or t, whichever occurs (not both).
Expr parse(std::string_view source, std::string_view variable = "");
std::string print(const Expr& e);
Complex evaluate(const Expr& e, Complex x);
Expr differentiate(const Expr& e);

/// K-th derivative of sinc at w.
Complex sinc_derivative(Complex w, int k);

/// Curve piece Lambda(t) = x(t) + i y(t) on [t0, t1] with symbolic derivatives.
/// y may be empty when x is already complex-valued.
Segment segment_from_expr(const Expr& x, const Expr& y, double t0, double t1);

/// Holomorphic function from an expression in z.
std::function<Complex(Complex)> function_from_expr(const Expr& f);

}  // namespace windline
