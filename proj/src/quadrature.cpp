#include "windline/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <vector>

namespace windline {

const std::array<double, 8> GaussKronrod15::kronrod_nodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000,
};

const std::array<double, 8> GaussKronrod15::kronrod_weights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714,
};

const std::array<double, 4> GaussKronrod15::gauss_weights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327,
};

namespace {

using Cx = std::complex<double>;

struct Interval {
    double a;
    double b;
    Cx value;
    double error;
    double gross;
    bool finite;
    bool operator<(const Interval& o) const { return error < o.error; }
};

Interval apply_rule(const std::function<Cx(double)>& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    const auto& xk = GaussKronrod15::kronrod_nodes;
    const auto& wk = GaussKronrod15::kronrod_weights;
    const auto& wg = GaussKronrod15::gauss_weights;

    const Cx fc = f(c);
    Cx kron = wk[7] * fc;
    Cx gauss = wg[3] * fc;
    double gross = wk[7] * std::abs(fc);
    bool finite = std::isfinite(fc.real()) && std::isfinite(fc.imag());
    for (int j = 0; j < 7; ++j) {
        const Cx f1 = f(c - h * xk[j]);
        const Cx f2 = f(c + h * xk[j]);
        finite = finite && std::isfinite(f1.real()) && std::isfinite(f1.imag()) && std::isfinite(f2.real()) &&
                 std::isfinite(f2.imag());
        kron += wk[j] * (f1 + f2);
        gross += wk[j] * (std::abs(f1) + std::abs(f2));
        if (j % 2 == 1) gauss += wg[j / 2] * (f1 + f2);
    }
    Interval iv{a, b, kron * h, std::abs((kron - gauss) * h), gross * std::abs(h), finite};
    if (!finite) iv.error = std::numeric_limits<double>::infinity();
    return iv;
}

}  // namespace

Cx kronrod15(const std::function<Cx(double)>& f, double a, double b) { return apply_rule(f, a, b).value; }

QuadratureResult integrate_adaptive(const std::function<Cx(double)>& f, double a, double b, double abs_tol,
                                    double rel_tol, std::size_t max_intervals) {
    QuadratureResult result;
    if (a == b) {
        result.converged = true;
        return result;
    }
    std::priority_queue<Interval> work;
    std::vector<Interval> done;
    work.push(apply_rule(f, a, b));
    Cx total = work.top().value;
    double err = work.top().error;
    std::size_t count = 1;
    const double min_width = 64.0 * std::numeric_limits<double>::epsilon() * std::max(std::abs(a), std::abs(b));

    while (!work.empty()) {
        if (err <= std::max(abs_tol, rel_tol * std::abs(total))) {
            result.converged = true;
            break;
        }
        if (count >= max_intervals) break;
        Interval top = work.top();
        work.pop();
        if (!top.finite) {
            result.finite = false;
            done.push_back(top);
            break;
        }
        const double mid = 0.5 * (top.a + top.b);
        if (top.b - top.a <= min_width) {
            // cannot be split further; accept its error as is
            done.push_back(top);
            err -= top.error;
            continue;
        }
        Interval left = apply_rule(f, top.a, mid);
        Interval right = apply_rule(f, mid, top.b);
        total += left.value + right.value - top.value;
        err += left.error + right.error - top.error;
        work.push(left);
        work.push(right);
        ++count;
    }
    while (!work.empty()) {
        done.push_back(work.top());
        work.pop();
    }
    std::sort(done.begin(), done.end(), [](const Interval& x, const Interval& y) { return x.a < y.a; });
    Cx sum{0.0, 0.0};
    double esum = 0.0;
    double gross = 0.0;
    for (const auto& iv : done) {
        sum += iv.value;
        esum += iv.error;
        gross += iv.gross;
        result.finite = result.finite && iv.finite;
    }
    result.value = sum;
    result.error = esum;
    result.gross = gross;
    result.intervals = done.size();
    if (!result.finite) result.converged = false;
    return result;
}

}  // namespace windline
