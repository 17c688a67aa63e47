#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace bayeskit {

enum class Family {
    Beta,               // (alpha, beta)
    Gamma,              // (shape alpha, rate beta)
    NormalPrecision,    // (mean mu, precision lambda)
    Pareto,             // (alpha, scale beta)
    Poisson,            // (rate lambda)
    Binomial,           // (trials m, theta)
    Bernoulli,          // (theta)
    Geometric,          // (theta); failures before the first success
    ContinuousUniform,  // (upper theta) on [0, theta]
    PoissonGamma,       // (alpha, beta, n)
    NormalGamma,        // (mu0, n0, alpha, beta)
};

std::string_view family_name(Family f);
std::optional<Family> parse_family(std::string_view name);
std::size_t family_arity(Family f);

// Immutable parametric distribution. Parameters are validated on construction.
class Distribution {
public:
    static Distribution make(Family family, std::span<const double> params);

    static Distribution beta(double alpha, double beta);
    static Distribution gamma(double shape, double rate);
    static Distribution normal_precision(double mean, double precision);
    static Distribution pareto(double alpha, double scale);
    static Distribution poisson(double rate);
    static Distribution binomial(int trials, double theta);
    static Distribution bernoulli(double theta);
    static Distribution geometric(double theta);
    static Distribution continuous_uniform(double upper);
    static Distribution poisson_gamma(double alpha, double beta, double n);
    static Distribution normal_gamma(double mu0, double n0, double alpha, double beta);

    Family family() const { return family_; }
    std::span<const double> params() const { return {params_.data(), arity_}; }
    double param(std::size_t i) const { return params_.at(i); }
    bool is_discrete() const;

    bool operator==(const Distribution& other) const = default;

private:
    Distribution(Family family, std::span<const double> params);

    Family family_;
    std::array<double, 4> params_{};
    std::size_t arity_ = 0;
};

struct Moments {
    double mean;
    double variance;
};

struct Support {
    double lower;
    double upper;
};

// Human-readable form such as "Gamma(1391.108, 2.01012)".
std::string describe(const Distribution& d);

double density(const Distribution& d, double x);
double log_density(const Distribution& d, double x);
double cdf(const Distribution& d, double x);
double quantile(const Distribution& d, double p);

double mean(const Distribution& d);
double variance(const Distribution& d);
Moments moments(const Distribution& d);

Support support(const Distribution& d);

std::vector<double> sample(const Distribution& d, std::size_t count, std::uint64_t seed);

// Joint density of (mu, lambda) under NormalGamma(mu0, n0, alpha, beta):
// N(mu | mu0, n0 * lambda) * Gamma(lambda | alpha, beta).
double normal_gamma_density(const Distribution& d, double mu, double lambda);
// Marginal law of the precision under a NormalGamma.
Distribution precision_marginal(const Distribution& d);

}  // namespace bayeskit
