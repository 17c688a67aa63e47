#pragma once

#include <functional>
#include <span>

namespace bayeskit::numeric {

using Function = std::function<double(double)>;

struct Quadrature {
    double value = 0.0;
    double error = 0.0;  // estimated absolute error
    bool converged = false;
};

// Adaptive Gauss-Kronrod (7/15) integration over a finite interval.
Quadrature integrate(const Function& f, double a, double b, double abs_tol = 1e-10,
                     double rel_tol = 1e-10, int max_subdivisions = 2000);

// Integrates piecewise across sorted breakpoints; useful for kinks or support edges.
Quadrature integrate(const Function& f, std::span<const double> breakpoints,
                     double abs_tol = 1e-10, double rel_tol = 1e-10);

// Same as integrate but throws NumericError with the achieved error on failure.
double integrate_or_throw(const Function& f, double a, double b, double abs_tol = 1e-10,
                          double rel_tol = 1e-10, const char* what = "integrate");

// Root of f on [lo, hi] given a sign change. Brent's method.
double find_root(const Function& f, double lo, double hi, double x_tol = 1e-14,
                 int max_iter = 500);

// Root with derivative information; Newton steps are rejected when they leave the bracket.
double safeguarded_newton(const Function& f, const Function& df, double lo, double hi,
                          double x_tol = 1e-14, int max_iter = 500);

}  // namespace bayeskit::numeric
