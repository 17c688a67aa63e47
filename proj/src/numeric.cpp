#include "bayeskit/numeric.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <queue>
#include <sstream>
#include <vector>

#include "bayeskit/error.hpp"

namespace bayeskit::numeric {
namespace {

constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
    double a, b, value, error;
    bool operator<(const Segment& o) const { return error < o.error; }
};

Segment kronrod(const Function& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    const double fc = f(c);
    double k = fc * kWgk[7];
    double g = fc * kWg[3];
    for (int j = 0; j < 7; ++j) {
        const double dx = h * kXgk[j];
        const double fsum = f(c - dx) + f(c + dx);
        k += kWgk[j] * fsum;
        if (j % 2 == 1) g += kWg[j / 2] * fsum;
    }
    return {a, b, k * h, std::abs((k - g) * h)};
}

}  // namespace

Quadrature integrate(const Function& f, double a, double b, double abs_tol, double rel_tol,
                     int max_subdivisions) {
    if (a == b) return {0.0, 0.0, true};
    if (!std::isfinite(a) || !std::isfinite(b)) {
        throw DomainError("integrate: bounds must be finite");
    }
    std::priority_queue<Segment> heap;
    Segment first = kronrod(f, a, b);
    double total = first.value;
    double err = first.error;
    heap.push(first);
    int count = 1;
    while (err > std::max(abs_tol, rel_tol * std::abs(total)) && count < max_subdivisions) {
        Segment worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (mid <= worst.a || mid >= worst.b) {
            heap.push(worst);
            break;
        }
        Segment left = kronrod(f, worst.a, mid);
        Segment right = kronrod(f, mid, worst.b);
        total += left.value + right.value - worst.value;
        err += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        ++count;
    }
    // Re-sum to shed accumulated rounding from the running updates.
    total = 0.0;
    err = 0.0;
    while (!heap.empty()) {
        total += heap.top().value;
        err += heap.top().error;
        heap.pop();
    }
    return {total, err, err <= std::max(abs_tol, rel_tol * std::abs(total))};
}

Quadrature integrate(const Function& f, std::span<const double> breakpoints, double abs_tol,
                     double rel_tol) {
    Quadrature out{0.0, 0.0, true};
    for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
        if (breakpoints[i + 1] <= breakpoints[i]) continue;
        const Quadrature q = integrate(f, breakpoints[i], breakpoints[i + 1], abs_tol, rel_tol);
        out.value += q.value;
        out.error += q.error;
        out.converged = out.converged && q.converged;
    }
    return out;
}

double integrate_or_throw(const Function& f, double a, double b, double abs_tol, double rel_tol,
                          const char* what) {
    const Quadrature q = integrate(f, a, b, abs_tol, rel_tol);
    if (!q.converged && q.error > 1e-6 * std::max(1.0, std::abs(q.value))) {
        std::ostringstream msg;
        msg << what << ": quadrature did not converge (achieved error " << q.error << ")";
        throw NumericError(msg.str());
    }
    return q.value;
}

double find_root(const Function& f, double lo, double hi, double x_tol, int max_iter) {
    double a = lo, b = hi;
    double fa = f(a), fb = f(b);
    if (fa == 0.0) return a;
    if (fb == 0.0) return b;
    if ((fa > 0.0) == (fb > 0.0)) throw NumericError("find_root: no sign change on bracket");
    double c = a, fc = fa, d = b - a, e = d;
    for (int it = 0; it < max_iter; ++it) {
        if ((fb > 0.0) == (fc > 0.0)) {
            c = a;
            fc = fa;
            d = e = b - a;
        }
        if (std::abs(fc) < std::abs(fb)) {
            a = b; b = c; c = a;
            fa = fb; fb = fc; fc = fa;
        }
        const double tol = 2.0 * 2.2e-16 * std::abs(b) + 0.5 * x_tol;
        const double m = 0.5 * (c - b);
        if (std::abs(m) <= tol || fb == 0.0) return b;
        if (std::abs(e) >= tol && std::abs(fa) > std::abs(fb)) {
            double p, q;
            const double s = fb / fa;
            if (a == c) {
                p = 2.0 * m * s;
                q = 1.0 - s;
            } else {
                const double qq = fa / fc;
                const double r = fb / fc;
                p = s * (2.0 * m * qq * (qq - r) - (b - a) * (r - 1.0));
                q = (qq - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if (p > 0.0) q = -q; else p = -p;
            if (2.0 * p < std::min(3.0 * m * q - std::abs(tol * q), std::abs(e * q))) {
                e = d;
                d = p / q;
            } else {
                d = m;
                e = m;
            }
        } else {
            d = m;
            e = m;
        }
        a = b;
        fa = fb;
        b += std::abs(d) > tol ? d : (m > 0.0 ? tol : -tol);
        fb = f(b);
    }
    throw NumericError("find_root: iteration limit reached");
}

double safeguarded_newton(const Function& f, const Function& df, double lo, double hi,
                          double x_tol, int max_iter) {
    double flo = f(lo), fhi = f(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if ((flo > 0.0) == (fhi > 0.0)) throw NumericError("safeguarded_newton: no sign change");
    if (flo > 0.0) std::swap(lo, hi);  // keep f(lo) < 0
    double x = 0.5 * (lo + hi);
    double dx_old = std::abs(hi - lo);
    double dx = dx_old;
    double fx = f(x), dfx = df(x);
    for (int it = 0; it < max_iter; ++it) {
        const bool out_of_bracket = ((x - hi) * dfx - fx) * ((x - lo) * dfx - fx) > 0.0;
        if (out_of_bracket || std::abs(2.0 * fx) > std::abs(dx_old * dfx) || dfx == 0.0) {
            dx_old = dx;
            dx = 0.5 * (hi - lo);
            x = lo + dx;
        } else {
            dx_old = dx;
            dx = fx / dfx;
            x -= dx;
        }
        if (std::abs(dx) <= x_tol * std::abs(x) || std::abs(dx) < 1e-300) return x;
        fx = f(x);
        dfx = df(x);
        if (fx == 0.0) return x;
        if (fx < 0.0) lo = x; else hi = x;
    }
    return x;
}

}  // namespace bayeskit::numeric
