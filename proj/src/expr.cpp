#include "windline/expr.hpp"

#include <array>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>

#include "windline/error.hpp"

namespace windline {

using NodePtr = std::shared_ptr<const Expr::Node>;
using Kind = Expr::Kind;

namespace {

constexpr std::array<std::string_view, 10> kFunctions = {"sin",  "cos", "tan", "sinh", "cosh",
                                                         "tanh", "exp", "log", "sqrt", "sinc"};
constexpr std::array<std::string_view, 6> kNonHolomorphic = {"conj", "re", "im", "abs", "arg", "real"};

NodePtr make(Kind kind, NodePtr a = nullptr, NodePtr b = nullptr) {
    auto n = std::make_shared<Expr::Node>();
    n->kind = kind;
    n->a = std::move(a);
    n->b = std::move(b);
    return n;
}

NodePtr make_number(double v) {
    auto n = std::make_shared<Expr::Node>();
    n->kind = Kind::Number;
    n->value = v;
    return n;
}

NodePtr make_call(const std::string& fn, int order, NodePtr arg) {
    auto n = std::make_shared<Expr::Node>();
    n->kind = Kind::Call;
    n->name = fn;
    n->order = order;
    n->a = std::move(arg);
    return n;
}

// "sinc_dK" -> K, otherwise -1
int sinc_order(std::string_view name) {
    if (name.size() < 7 || name.substr(0, 6) != "sinc_d") return -1;
    int k = 0;
    for (char c : name.substr(6)) {
        if (!std::isdigit(static_cast<unsigned char>(c))) return -1;
        k = 10 * k + (c - '0');
        if (k > 64) return -1;
    }
    return k;
}

bool is_number(const NodePtr& n, double v) { return n->kind == Kind::Number && n->value == v; }

// --- parser -----------------------------------------------------------------

class Parser {
public:
    Parser(std::string_view src, std::string_view var) : src_(src), var_(var) {}

    NodePtr run() {
        skip();
        if (pos_ >= src_.size()) throw ParseError(ErrorCode::SyntaxError, "empty expression", pos_);
        auto n = expr();
        skip();
        if (pos_ < src_.size()) fail("unexpected character '" + std::string(1, src_[pos_]) + "'");
        return n;
    }

    const std::string& variable() const { return var_; }

private:
    [[noreturn]] void fail(const std::string& msg) const { throw ParseError(ErrorCode::SyntaxError, msg, pos_); }

    void skip() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    }

    bool eat(char c) {
        skip();
        if (pos_ < src_.size() && src_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    NodePtr expr() {
        auto lhs = term();
        for (;;) {
            if (eat('+')) {
                lhs = make(Kind::Add, lhs, term());
            } else if (eat('-')) {
                lhs = make(Kind::Sub, lhs, term());
            } else {
                return lhs;
            }
        }
    }

    NodePtr term() {
        auto lhs = unary();
        for (;;) {
            if (eat('*')) {
                lhs = make(Kind::Mul, lhs, unary());
            } else if (eat('/')) {
                lhs = make(Kind::Div, lhs, unary());
            } else {
                return lhs;
            }
        }
    }

    NodePtr unary() {
        if (eat('-')) return make(Kind::Neg, unary());
        if (eat('+')) return unary();
        return power();
    }

    NodePtr power() {
        auto base = primary();
        if (eat('^')) return make(Kind::Pow, base, unary());
        return base;
    }

    NodePtr primary() {
        skip();
        if (pos_ >= src_.size()) fail("unexpected end of input");
        const char c = src_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
        if (eat('(')) {
            auto inner = expr();
            if (!eat(')')) fail("expected ')'");
            return inner;
        }
        fail("unexpected character '" + std::string(1, c) + "'");
    }

    NodePtr number() {
        const std::size_t start = pos_;
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
        if (pos_ < src_.size() && src_[pos_] == '.') {
            ++pos_;
            while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
        }
        if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
            std::size_t p = pos_ + 1;
            if (p < src_.size() && (src_[p] == '+' || src_[p] == '-')) ++p;
            if (p < src_.size() && std::isdigit(static_cast<unsigned char>(src_[p]))) {
                pos_ = p;
                while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
            }
        }
        const std::string text(src_.substr(start, pos_ - start));
        if (text == ".") {
            pos_ = start;
            fail("malformed number");
        }
        const double v = std::strtod(text.c_str(), nullptr);
        if (pos_ < src_.size() && (std::isalpha(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '(')) {
            fail("implicit multiplication is not supported; use '*'");
        }
        return make_number(v);
    }

    NodePtr identifier() {
        const std::size_t start = pos_;
        while (pos_ < src_.size() &&
               (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) {
            ++pos_;
        }
        const std::string name(src_.substr(start, pos_ - start));
        skip();
        const bool is_call = pos_ < src_.size() && src_[pos_] == '(';
        if (is_call) {
            for (auto bad : kNonHolomorphic) {
                if (name == bad) {
                    throw ParseError(ErrorCode::NonHolomorphic,
                                     "'" + name + "' is not holomorphic and cannot be integrated by residues", start);
                }
            }
            const int k = sinc_order(name);
            bool known = k >= 0;
            for (auto f : kFunctions) known = known || name == f;
            if (!known) throw ParseError(ErrorCode::UnknownFunction, "unknown function '" + name + "'", start);
            ++pos_;
            auto arg = expr();
            if (!eat(')')) fail("expected ')' after function argument");
            if (k == 0) return make_call("sinc", 0, arg);
            return make_call(k > 0 ? "sinc_d" : name, std::max(k, 0), arg);
        }
        if (name == "pi") return make(Kind::Pi);
        if (name == "e") return make(Kind::E);
        if (name == "i") return make(Kind::ImagUnit);
        if (name == "z" || name == "t") {
            if (var_.empty()) var_ = name;
            if (name != var_) {
                throw ParseError(ErrorCode::SyntaxError, "expression mixes the variables z and t", start);
            }
            return make(Kind::Variable);
        }
        throw ParseError(ErrorCode::SyntaxError, "unknown identifier '" + name + "'", start);
    }

    std::string_view src_;
    std::string var_;
    std::size_t pos_ = 0;
};

// --- printer ----------------------------------------------------------------

int precedence(const NodePtr& n) {
    switch (n->kind) {
        case Kind::Add:
        case Kind::Sub: return 1;
        case Kind::Mul:
        case Kind::Div: return 2;
        case Kind::Neg: return 3;
        case Kind::Pow: return 4;
        default: return 5;
    }
}

std::string format_number(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string print_node(const NodePtr& n);

std::string wrap(const NodePtr& n, bool parens) { return parens ? "(" + print_node(n) + ")" : print_node(n); }

std::string print_node(const NodePtr& n) {
    switch (n->kind) {
        case Kind::Number: return format_number(n->value);
        case Kind::ImagUnit: return "i";
        case Kind::Pi: return "pi";
        case Kind::E: return "e";
        case Kind::Variable: return "#";
        case Kind::Neg: return "-" + wrap(n->a, precedence(n->a) < 4 && n->a->kind != Kind::Neg);
        case Kind::Add:
        case Kind::Sub: {
            const char* op = n->kind == Kind::Add ? " + " : " - ";
            return wrap(n->a, false) + op + wrap(n->b, precedence(n->b) <= 1);
        }
        case Kind::Mul:
        case Kind::Div: {
            const char* op = n->kind == Kind::Mul ? "*" : "/";
            return wrap(n->a, precedence(n->a) < 2) + op + wrap(n->b, precedence(n->b) <= 2 && n->b->kind != Kind::Neg);
        }
        case Kind::Pow:
            return wrap(n->a, precedence(n->a) <= 4 || (n->a->kind == Kind::Number && n->a->value < 0)) + "^" +
                   wrap(n->b, precedence(n->b) < 3);
        case Kind::Call: {
            const std::string name = n->name == "sinc_d" ? "sinc_d" + std::to_string(n->order) : n->name;
            return name + "(" + print_node(n->a) + ")";
        }
    }
    return "?";
}

// --- evaluation ---------------------------------------------------------------

Complex integer_power(Complex base, long long n) {
    if (n < 0) return Complex(1.0, 0.0) / integer_power(base, -n);
    Complex result{1.0, 0.0};
    while (n > 0) {
        if (n & 1) result *= base;
        base *= base;
        n >>= 1;
    }
    return result;
}

Complex eval_node(const NodePtr& n, Complex x) {
    switch (n->kind) {
        case Kind::Number: return {n->value, 0.0};
        case Kind::ImagUnit: return {0.0, 1.0};
        case Kind::Pi: return {kPi, 0.0};
        case Kind::E: return {2.718281828459045235360287471352662, 0.0};
        case Kind::Variable: return x;
        case Kind::Neg: return -eval_node(n->a, x);
        case Kind::Add: return eval_node(n->a, x) + eval_node(n->b, x);
        case Kind::Sub: return eval_node(n->a, x) - eval_node(n->b, x);
        case Kind::Mul: return eval_node(n->a, x) * eval_node(n->b, x);
        case Kind::Div: return eval_node(n->a, x) / eval_node(n->b, x);
        case Kind::Pow: {
            const Complex base = eval_node(n->a, x);
            const Complex ex = eval_node(n->b, x);
            if (ex.imag() == 0.0 && std::abs(ex.real()) <= 1024.0 && ex.real() == std::round(ex.real())) {
                return integer_power(base, static_cast<long long>(ex.real()));
            }
            if (base == Complex(0.0, 0.0)) return ex.real() > 0.0 ? Complex(0.0, 0.0) : Complex(INFINITY, 0.0);
            return std::exp(ex * std::log(base));
        }
        case Kind::Call: {
            const Complex w = eval_node(n->a, x);
            const std::string& f = n->name;
            if (f == "sin") return std::sin(w);
            if (f == "cos") return std::cos(w);
            if (f == "tan") return std::tan(w);
            if (f == "sinh") return std::sinh(w);
            if (f == "cosh") return std::cosh(w);
            if (f == "tanh") return std::tanh(w);
            if (f == "exp") return std::exp(w);
            if (f == "log") return std::log(w);
            if (f == "sqrt") return std::sqrt(w);
            if (f == "sinc") return sinc_derivative(w, 0);
            if (f == "sinc_d") return sinc_derivative(w, n->order);
            throw Error(ErrorCode::UnknownFunction, "unknown function '" + f + "'");
        }
    }
    return {0.0, 0.0};
}

// --- differentiation ------------------------------------------------------------

NodePtr s_neg(const NodePtr& a) {
    if (is_number(a, 0.0)) return a;
    if (a->kind == Kind::Neg) return a->a;
    return make(Kind::Neg, a);
}

// numbers stay non-negative in the tree so printing round-trips
NodePtr signed_number(double v) { return v < 0.0 ? make(Kind::Neg, make_number(-v)) : make_number(v); }

NodePtr s_add(const NodePtr& a, const NodePtr& b) {
    if (is_number(a, 0.0)) return b;
    if (is_number(b, 0.0)) return a;
    if (a->kind == Kind::Number && b->kind == Kind::Number) return signed_number(a->value + b->value);
    if (b->kind == Kind::Neg) return make(Kind::Sub, a, b->a);
    return make(Kind::Add, a, b);
}

NodePtr s_sub(const NodePtr& a, const NodePtr& b) {
    if (is_number(b, 0.0)) return a;
    if (is_number(a, 0.0)) return s_neg(b);
    if (a->kind == Kind::Number && b->kind == Kind::Number) return signed_number(a->value - b->value);
    if (b->kind == Kind::Neg) return make(Kind::Add, a, b->a);
    return make(Kind::Sub, a, b);
}

NodePtr s_mul(const NodePtr& a, const NodePtr& b) {
    if (is_number(a, 0.0) || is_number(b, 0.0)) return make_number(0.0);
    if (is_number(a, 1.0)) return b;
    if (is_number(b, 1.0)) return a;
    if (a->kind == Kind::Number && b->kind == Kind::Number) return make_number(a->value * b->value);
    if (a->kind == Kind::Neg) return s_neg(s_mul(a->a, b));
    if (b->kind == Kind::Neg) return s_neg(s_mul(a, b->a));
    return make(Kind::Mul, a, b);
}

NodePtr s_div(const NodePtr& a, const NodePtr& b) {
    if (is_number(a, 0.0)) return make_number(0.0);
    if (is_number(b, 1.0)) return a;
    if (a->kind == Kind::Neg) return s_neg(s_div(a->a, b));
    return make(Kind::Div, a, b);
}

NodePtr s_pow(const NodePtr& a, const NodePtr& b) {
    if (is_number(b, 1.0)) return a;
    if (is_number(b, 0.0)) return make_number(1.0);
    return make(Kind::Pow, a, b);
}

bool depends(const NodePtr& n) {
    if (!n) return false;
    if (n->kind == Kind::Variable) return true;
    return depends(n->a) || depends(n->b);
}

NodePtr diff(const NodePtr& n) {
    switch (n->kind) {
        case Kind::Number:
        case Kind::ImagUnit:
        case Kind::Pi:
        case Kind::E: return make_number(0.0);
        case Kind::Variable: return make_number(1.0);
        case Kind::Neg: return s_neg(diff(n->a));
        case Kind::Add: return s_add(diff(n->a), diff(n->b));
        case Kind::Sub: return s_sub(diff(n->a), diff(n->b));
        case Kind::Mul: return s_add(s_mul(diff(n->a), n->b), s_mul(n->a, diff(n->b)));
        case Kind::Div: {
            if (!depends(n->b)) return s_div(diff(n->a), n->b);
            const auto num = s_sub(s_mul(diff(n->a), n->b), s_mul(n->a, diff(n->b)));
            return s_div(num, s_pow(n->b, make_number(2.0)));
        }
        case Kind::Pow: {
            const auto& a = n->a;
            const auto& b = n->b;
            if (!depends(b)) {
                // b a^(b-1) a'
                NodePtr reduced;
                if (b->kind == Kind::Number) {
                    reduced = signed_number(b->value - 1.0);
                } else if (b->kind == Kind::Neg && b->a->kind == Kind::Number) {
                    reduced = signed_number(-b->a->value - 1.0);
                } else {
                    reduced = s_sub(b, make_number(1.0));
                }
                return s_mul(s_mul(b, s_pow(a, reduced)), diff(a));
            }
            // a^b (b' log a + b a' / a)
            const auto inner = s_add(s_mul(diff(b), make_call("log", 0, a)), s_div(s_mul(b, diff(a)), a));
            return s_mul(n, inner);
        }
        case Kind::Call: {
            const auto& u = n->a;
            const std::string& f = n->name;
            NodePtr outer;
            if (f == "sin") {
                outer = make_call("cos", 0, u);
            } else if (f == "cos") {
                outer = s_neg(make_call("sin", 0, u));
            } else if (f == "tan") {
                outer = s_div(make_number(1.0), s_pow(make_call("cos", 0, u), make_number(2.0)));
            } else if (f == "sinh") {
                outer = make_call("cosh", 0, u);
            } else if (f == "cosh") {
                outer = make_call("sinh", 0, u);
            } else if (f == "tanh") {
                outer = s_div(make_number(1.0), s_pow(make_call("cosh", 0, u), make_number(2.0)));
            } else if (f == "exp") {
                outer = n;
            } else if (f == "log") {
                outer = s_div(make_number(1.0), u);
            } else if (f == "sqrt") {
                outer = s_div(make_number(1.0), s_mul(make_number(2.0), n));
            } else if (f == "sinc") {
                outer = make_call("sinc_d", 1, u);
            } else if (f == "sinc_d") {
                outer = make_call("sinc_d", n->order + 1, u);
            } else {
                throw Error(ErrorCode::NonDifferentiable, "cannot differentiate '" + f + "'");
            }
            return s_mul(outer, diff(u));
        }
    }
    throw Error(ErrorCode::NonDifferentiable, "unsupported node");
}

bool same(const NodePtr& x, const NodePtr& y) {
    if (!x || !y) return !x && !y;
    if (x->kind != y->kind) return false;
    if (x->kind == Kind::Number && std::memcmp(&x->value, &y->value, sizeof(double)) != 0) return false;
    if (x->kind == Kind::Call && (x->name != y->name || x->order != y->order)) return false;
    return same(x->a, y->a) && same(x->b, y->b);
}

}  // namespace

// --- sinc ---------------------------------------------------------------------

Complex sinc_derivative(Complex w, int k) {
    if (k < 0) throw Error(ErrorCode::InvalidInput, "negative derivative order");
    if (std::abs(w) < 1.0 + k) {
        // sinc(w) = sum (-1)^m w^(2m) / (2m+1)!, differentiated k times term by term
        Complex sum{0.0, 0.0};
        const Complex w2 = w * w;
        int m = (k + 1) / 2;
        // coefficient (-1)^m / ((2m+1) (2m-k)!) times w^(2m-k)
        double fact = 1.0;  // (2m-k)!
        for (int j = 2; j <= 2 * m - k; ++j) fact *= j;
        Complex wp = integer_power(w, 2 * m - k);
        for (int it = 0; it < 200; ++it, ++m) {
            const double sign = (m % 2 == 0) ? 1.0 : -1.0;
            const Complex term = sign * wp / ((2.0 * m + 1.0) * fact);
            sum += term;
            if (it > 2 && std::abs(term) <= 1e-17 * std::abs(sum)) break;
            wp *= w2;
            fact *= static_cast<double>(2 * m - k + 1) * static_cast<double>(2 * m - k + 2);
        }
        return sum;
    }
    // w s^(j) + j s^(j-1) = sin^(j)(w)
    const Complex s = std::sin(w);
    const Complex c = std::cos(w);
    const std::array<Complex, 4> sin_derivs = {s, c, -s, -c};
    Complex value = s / w;
    for (int j = 1; j <= k; ++j) value = (sin_derivs[static_cast<std::size_t>(j % 4)] - static_cast<double>(j) * value) / w;
    return value;
}

// --- Expr -------------------------------------------------------------------

Complex Expr::operator()(Complex x) const {
    if (!root_) throw Error(ErrorCode::InvalidInput, "empty expression");
    return eval_node(root_, x);
}

std::string Expr::str() const {
    if (!root_) return "";
    std::string s = print_node(root_);
    std::string out;
    for (char c : s) {
        if (c == '#') {
            out += var_;
        } else {
            out += c;
        }
    }
    return out;
}

Expr Expr::derivative() const {
    if (!root_) throw Error(ErrorCode::InvalidInput, "empty expression");
    return Expr(diff(root_), var_);
}

bool Expr::same_as(const Expr& other) const { return var_ == other.var_ && same(root_, other.root_); }

Expr Expr::number(double v, std::string var) { return Expr(make_number(v), std::move(var)); }
Expr Expr::imaginary_unit(std::string var) { return Expr(make(Kind::ImagUnit), std::move(var)); }
Expr Expr::pi(std::string var) { return Expr(make(Kind::Pi), std::move(var)); }
Expr Expr::euler(std::string var) { return Expr(make(Kind::E), std::move(var)); }
Expr Expr::var(std::string name) { return Expr(make(Kind::Variable), std::move(name)); }

Expr Expr::call(const std::string& fn, const Expr& arg) {
    const int k = sinc_order(fn);
    if (k > 0) return Expr(make_call("sinc_d", k, arg.root_), arg.var_);
    bool known = k == 0;
    for (auto f : kFunctions) known = known || fn == f;
    if (!known) throw Error(ErrorCode::UnknownFunction, "unknown function '" + fn + "'");
    return Expr(make_call(k == 0 ? "sinc" : fn, 0, arg.root_), arg.var_);
}

Expr operator-(const Expr& a) { return Expr(make(Kind::Neg, a.root_), a.var_); }
Expr operator+(const Expr& a, const Expr& b) { return Expr(make(Kind::Add, a.root_, b.root_), a.var_); }
Expr operator-(const Expr& a, const Expr& b) { return Expr(make(Kind::Sub, a.root_, b.root_), a.var_); }
Expr operator*(const Expr& a, const Expr& b) { return Expr(make(Kind::Mul, a.root_, b.root_), a.var_); }
Expr operator/(const Expr& a, const Expr& b) { return Expr(make(Kind::Div, a.root_, b.root_), a.var_); }
Expr pow(const Expr& a, const Expr& b) { return Expr(make(Kind::Pow, a.root_, b.root_), a.var_); }

Expr parse(std::string_view source, std::string_view variable) {
    Parser p(source, variable);
    auto root = p.run();
    return Expr(std::move(root), p.variable().empty() ? std::string(variable.empty() ? "z" : variable)
                                                       : p.variable());
}

std::string print(const Expr& e) { return e.str(); }
Complex evaluate(const Expr& e, Complex x) { return e(x); }
Expr differentiate(const Expr& e) { return e.derivative(); }

Segment segment_from_expr(const Expr& x, const Expr& y, double t0, double t1) {
    if (!(t0 < t1)) throw Error(ErrorCode::InvalidInput, "expression segment needs t0 < t1");
    const Complex iu{0.0, 1.0};
    const Expr dx = x.derivative();
    const Expr ddx = dx.derivative();
    Segment seg;
    seg.t0 = t0;
    seg.t1 = t1;
    if (y.empty()) {
        seg.eval = [x](double t) { return x(t); };
        seg.deriv = [dx](double t) { return dx(t); };
        seg.deriv2 = [ddx](double t) { return ddx(t); };
        return seg;
    }
    const Expr dy = y.derivative();
    const Expr ddy = dy.derivative();
    seg.eval = [x, y, iu](double t) { return x(t) + iu * y(t); };
    seg.deriv = [dx, dy, iu](double t) { return dx(t) + iu * dy(t); };
    seg.deriv2 = [ddx, ddy, iu](double t) { return ddx(t) + iu * ddy(t); };
    return seg;
}

std::function<Complex(Complex)> function_from_expr(const Expr& f) {
    return [f](Complex z) { return f(z); };
}

}  // namespace windline
