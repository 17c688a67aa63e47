#pragma once

#include <functional>
#include <limits>
#include <optional>
#include <string>

#include "bayeskit/conjugate.hpp"
#include "bayeskit/distribution.hpp"
#include "bayeskit/jet.hpp"

namespace bayeskit {

enum class ModelFamily {
    Bernoulli,
    Binomial,              // trials m
    Poisson,
    Exponential,
    Geometric,             // failures before the first success
    NormalKnownPrecision,  // parameter is the mean
    NormalKnownMean,       // parameter is the precision
    ContinuousUniform,     // not regular
};

struct SamplingModel {
    ModelFamily family = ModelFamily::Bernoulli;
    int trials = 1;
    double known = std::numeric_limits<double>::quiet_NaN();
};

std::string model_name(const SamplingModel& m);

// Unnormalized density of a possibly improper prior.
struct ImproperDensity {
    std::string family;
    std::function<double(double)> log_density;  // up to an additive constant
    Support support;
    bool proper = false;
    std::optional<Distribution> normalized;  // set when proper
};

struct FisherInfo {
    std::string family;
    std::function<double(double)> information;
    Support domain;  // open parameter interval
};

// log p(x | theta) written once for plain doubles and for jets.
template <class T>
T log_likelihood(const SamplingModel& m, double x, T theta);

FisherInfo fisher_info(const SamplingModel& m);
double fisher_information(const SamplingModel& m, double theta);

// -E[d^2/dphi^2 log p(X | theta(phi))] evaluated directly in the new parameter.
// The expectation is exact for finite supports and truncated at 1e-16 tail
// mass or computed by quadrature otherwise.
double fisher_information_reparameterized(const SamplingModel& m,
                                          const std::function<Jet(Jet)>& theta_of_phi,
                                          double phi);

ImproperDensity jeffreys_prior(const SamplingModel& m);
Distribution jeffreys_posterior(const SamplingModel& m, const SampleSummary& data);

}  // namespace bayeskit
