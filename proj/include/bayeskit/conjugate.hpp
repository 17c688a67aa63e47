#pragma once

#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "bayeskit/distribution.hpp"
#include "bayeskit/prob_vector.hpp"

namespace bayeskit {

enum class Likelihood {
    Bernoulli,             // prior Beta
    Poisson,               // prior Gamma
    Geometric,             // prior Beta; failures before the first success
    Exponential,           // prior Gamma on the rate
    ContinuousUniform,     // prior Pareto on the upper endpoint
    NormalKnownPrecision,  // prior NormalPrecision on the mean; known = precision
    NormalKnownMean,       // prior Gamma on the precision; known = mean
    NormalBoth,            // prior NormalGamma on (mean, precision)
};

std::string_view likelihood_name(Likelihood l);
std::optional<Likelihood> parse_likelihood(std::string_view name);
Family conjugate_family(Likelihood l);
bool needs_known_constant(Likelihood l);

// Sufficient statistics for an i.i.d. sample.
struct SampleSummary {
    std::size_t n = 0;
    double sum = 0.0;
    double sum_sq = 0.0;
    double max = -std::numeric_limits<double>::infinity();

    double r() const { return sum; }

    static SampleSummary from_data(std::span<const double> xs);
    // Summary for binary data with r successes out of n.
    static SampleSummary binary(std::size_t n, std::size_t r);
    // Pooled summary of two disjoint samples.
    SampleSummary merged(const SampleSummary& other) const;
};

class ConjugateModel {
public:
    // Throws DomainError when the prior family does not match the likelihood
    // or a required known constant is missing.
    ConjugateModel(Likelihood likelihood, Distribution prior,
                   double known = std::numeric_limits<double>::quiet_NaN());

    Likelihood likelihood() const { return likelihood_; }
    const Distribution& prior() const { return prior_; }
    double known() const { return known_; }

    ConjugateModel with_prior(Distribution prior) const { return {likelihood_, prior, known_}; }

    // log p(x | theta) for a single observation.
    double log_likelihood(double x, double theta) const;

private:
    Likelihood likelihood_;
    Distribution prior_;
    double known_;
};

// Rejects observations outside the support of the likelihood.
void validate_data(Likelihood likelihood, std::span<const double> xs);

// Predictive law of the next observation. Either a closed-form Distribution or
// a density evaluated by quadrature against the parameter distribution.
class Predictive {
public:
    explicit Predictive(Distribution closed);
    Predictive(std::function<double(double)> density, bool discrete, Support support);

    bool has_closed_form() const { return closed_.has_value(); }
    const Distribution& distribution() const;
    double density(double x) const;
    bool is_discrete() const { return discrete_; }
    Support support() const { return support_; }

private:
    std::optional<Distribution> closed_;
    std::function<double(double)> density_;
    bool discrete_ = false;
    Support support_{};
};

Distribution posterior(const ConjugateModel& model, const SampleSummary& data);
Predictive prior_predictive(const ConjugateModel& model);
Predictive posterior_predictive(const ConjugateModel& model, const SampleSummary& data);

// Finite-support prior over a scalar parameter.
struct GridPrior {
    GridPrior(std::vector<double> support, ProbVector weights);
    GridPrior(std::vector<double> support, std::vector<double> weights);

    std::vector<double> support;
    ProbVector weights;
};

enum class GridFamily { Bernoulli, Binomial, Poisson, Geometric, Exponential };

struct GridLikelihood {
    GridFamily family = GridFamily::Bernoulli;
    int trials = 1;  // Binomial only

    double log_density(double x, double theta) const;
};

GridPrior grid_posterior(const GridPrior& prior, const GridLikelihood& likelihood,
                         std::span<const double> data);
// Mixture law of the next observation; outcomes are labeled "0", "1", ...
ProbVector grid_predictive(const GridPrior& prior, const GridLikelihood& likelihood);

// Stake ratio a/b making a bet on X = 1 fair: p(1) / p(0).
double fair_bet_ratio(const ProbVector& predictive);

// P(B | A) from P(B), P(A | B) and P(A | not B).
double event_posterior(double prior_b, double p_a_given_b, double p_a_given_not_b);

}  // namespace bayeskit
