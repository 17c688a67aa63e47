#pragma once

namespace bayeskit::special {

// Natural log of |Gamma(x)| by the Lanczos approximation (g = 7, 9 terms).
double log_gamma(double x);

double log_beta(double a, double b);

// log(n!) for nonnegative integer-valued n.
double log_factorial(double n);

// Regularized lower incomplete gamma P(a, x).
double gamma_p(double a, double x);
// Regularized upper incomplete gamma Q(a, x) = 1 - P(a, x), computed without cancellation.
double gamma_q(double a, double x);

// Regularized incomplete beta I_x(a, b).
double beta_inc(double a, double b, double x);

double normal_cdf(double z);
double normal_quantile(double p);

}  // namespace bayeskit::special
