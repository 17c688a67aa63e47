#pragma once

#include <cmath>

namespace bayeskit {

// Second-order forward-mode jet: a value with its first and second derivative
// along a single direction. Enough to differentiate scalar log-likelihoods twice.
struct Jet {
    double v = 0.0;
    double d1 = 0.0;
    double d2 = 0.0;

    static Jet variable(double x) { return {x, 1.0, 0.0}; }
    static Jet constant(double x) { return {x, 0.0, 0.0}; }
};

inline Jet operator+(Jet a, Jet b) { return {a.v + b.v, a.d1 + b.d1, a.d2 + b.d2}; }
inline Jet operator-(Jet a, Jet b) { return {a.v - b.v, a.d1 - b.d1, a.d2 - b.d2}; }
inline Jet operator-(Jet a) { return {-a.v, -a.d1, -a.d2}; }
inline Jet operator*(Jet a, Jet b) {
    return {a.v * b.v, a.d1 * b.v + a.v * b.d1, a.d2 * b.v + 2.0 * a.d1 * b.d1 + a.v * b.d2};
}
inline Jet operator/(Jet a, Jet b) {
    const double q = a.v / b.v;
    const double q1 = (a.d1 - q * b.d1) / b.v;
    const double q2 = (a.d2 - 2.0 * q1 * b.d1 - q * b.d2) / b.v;
    return {q, q1, q2};
}
inline Jet operator+(Jet a, double b) { return {a.v + b, a.d1, a.d2}; }
inline Jet operator+(double a, Jet b) { return b + a; }
inline Jet operator-(Jet a, double b) { return {a.v - b, a.d1, a.d2}; }
inline Jet operator-(double a, Jet b) { return {a - b.v, -b.d1, -b.d2}; }
inline Jet operator*(Jet a, double b) { return {a.v * b, a.d1 * b, a.d2 * b}; }
inline Jet operator*(double a, Jet b) { return b * a; }
inline Jet operator/(Jet a, double b) { return {a.v / b, a.d1 / b, a.d2 / b}; }
inline Jet operator/(double a, Jet b) { return Jet::constant(a) / b; }

inline Jet log(Jet a) {
    return {std::log(a.v), a.d1 / a.v, a.d2 / a.v - (a.d1 * a.d1) / (a.v * a.v)};
}
inline Jet exp(Jet a) {
    const double e = std::exp(a.v);
    return {e, e * a.d1, e * (a.d2 + a.d1 * a.d1)};
}
inline Jet sqrt(Jet a) {
    const double s = std::sqrt(a.v);
    return {s, a.d1 / (2.0 * s), a.d2 / (2.0 * s) - a.d1 * a.d1 / (4.0 * s * a.v)};
}

}  // namespace bayeskit
