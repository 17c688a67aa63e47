#include "bayeskit/jeffreys.hpp"

#include <cmath>
#include <numbers>
#include <vector>

#include "bayeskit/error.hpp"
#include "bayeskit/numeric.hpp"
#include "bayeskit/special.hpp"

namespace bayeskit {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

[[noreturn]] void not_regular() {
    throw RegularityError(
        "uniform(0, theta) has a parameter-dependent support; Fisher information is undefined");
}

Support parameter_domain(const SamplingModel& m) {
    switch (m.family) {
        case ModelFamily::Bernoulli:
        case ModelFamily::Binomial:
        case ModelFamily::Geometric:
            return {0.0, 1.0};
        case ModelFamily::NormalKnownPrecision:
            return {-kInf, kInf};
        default:
            return {0.0, kInf};
    }
}

void check_model(const SamplingModel& m) {
    if (m.family == ModelFamily::ContinuousUniform) not_regular();
    if (m.family == ModelFamily::Binomial && m.trials < 1) {
        throw DomainError("binomial: trials must be positive");
    }
    if (m.family == ModelFamily::NormalKnownPrecision && !(m.known > 0.0)) {
        throw DomainError("normal_known_precision: known precision must be positive");
    }
    if (m.family == ModelFamily::NormalKnownMean && !std::isfinite(m.known)) {
        throw DomainError("normal_known_mean: known mean must be finite");
    }
}

void check_theta(const SamplingModel& m, double theta) {
    const Support d = parameter_domain(m);
    if (!(theta > d.lower && theta < d.upper)) {
        throw DomainError(model_name(m) + ": parameter outside the interior of its domain");
    }
}

// Law of a single observation at parameter theta.
Distribution observation_law(const SamplingModel& m, double theta) {
    switch (m.family) {
        case ModelFamily::Bernoulli: return Distribution::bernoulli(theta);
        case ModelFamily::Binomial: return Distribution::binomial(m.trials, theta);
        case ModelFamily::Poisson: return Distribution::poisson(theta);
        case ModelFamily::Exponential: return Distribution::gamma(1.0, theta);
        case ModelFamily::Geometric: return Distribution::geometric(theta);
        case ModelFamily::NormalKnownPrecision: return Distribution::normal_precision(theta, m.known);
        case ModelFamily::NormalKnownMean: return Distribution::normal_precision(m.known, theta);
        case ModelFamily::ContinuousUniform: not_regular();
    }
    not_regular();
}

}  // namespace

std::string model_name(const SamplingModel& m) {
    switch (m.family) {
        case ModelFamily::Bernoulli: return "bernoulli";
        case ModelFamily::Binomial: return "binomial";
        case ModelFamily::Poisson: return "poisson";
        case ModelFamily::Exponential: return "exponential";
        case ModelFamily::Geometric: return "geometric";
        case ModelFamily::NormalKnownPrecision: return "normal_known_precision";
        case ModelFamily::NormalKnownMean: return "normal_known_mean";
        case ModelFamily::ContinuousUniform: return "uniform";
    }
    return "unknown";
}

template <class T>
T log_likelihood(const SamplingModel& m, double x, T theta) {
    using std::log;
    const double two_pi = 2.0 * std::numbers::pi;
    switch (m.family) {
        case ModelFamily::Bernoulli:
            return x * log(theta) + (1.0 - x) * log(1.0 - theta);
        case ModelFamily::Binomial: {
            const double n = m.trials;
            const double lchoose = special::log_factorial(n) - special::log_factorial(x) -
                                   special::log_factorial(n - x);
            return lchoose + x * log(theta) + (n - x) * log(1.0 - theta);
        }
        case ModelFamily::Poisson:
            return x * log(theta) - theta - special::log_factorial(x);
        case ModelFamily::Exponential:
            return log(theta) - theta * x;
        case ModelFamily::Geometric:
            return log(theta) + x * log(1.0 - theta);
        case ModelFamily::NormalKnownPrecision: {
            const T z = x - theta;
            return 0.5 * std::log(m.known / two_pi) - 0.5 * m.known * (z * z);
        }
        case ModelFamily::NormalKnownMean: {
            const double z = x - m.known;
            return 0.5 * log(theta / two_pi) - 0.5 * z * z * theta;
        }
        case ModelFamily::ContinuousUniform:
            not_regular();
    }
    not_regular();
}

template double log_likelihood<double>(const SamplingModel&, double, double);
template Jet log_likelihood<Jet>(const SamplingModel&, double, Jet);

FisherInfo fisher_info(const SamplingModel& m) {
    check_model(m);
    return {model_name(m), [m](double t) { return fisher_information(m, t); }, parameter_domain(m)};
}

double fisher_information(const SamplingModel& m, double theta) {
    check_model(m);
    check_theta(m, theta);
    switch (m.family) {
        case ModelFamily::Bernoulli: return 1.0 / (theta * (1.0 - theta));
        case ModelFamily::Binomial: return m.trials / (theta * (1.0 - theta));
        case ModelFamily::Poisson: return 1.0 / theta;
        case ModelFamily::Exponential: return 1.0 / (theta * theta);
        case ModelFamily::Geometric: return 1.0 / (theta * theta * (1.0 - theta));
        case ModelFamily::NormalKnownPrecision: return m.known;
        case ModelFamily::NormalKnownMean: return 1.0 / (2.0 * theta * theta);
        case ModelFamily::ContinuousUniform: not_regular();
    }
    not_regular();
}

double fisher_information_reparameterized(const SamplingModel& m,
                                          const std::function<Jet(Jet)>& theta_of_phi,
                                          double phi) {
    check_model(m);
    const Jet theta = theta_of_phi(Jet::variable(phi));
    check_theta(m, theta.v);
    const Distribution law = observation_law(m, theta.v);
    const auto curvature = [&](double x) { return log_likelihood(m, x, theta).d2; };

    if (law.is_discrete()) {
        const double upper = support(law).upper;
        double total = 0.0;
        double mass = 0.0;
        const double centre = bayeskit::mean(law);
        for (double x = 0.0; x <= upper; x += 1.0) {
            const double p = density(law, x);
            mass += p;
            total -= p * curvature(x);
            if (x > centre && (1.0 - mass < 1e-16 || p < 1e-300)) break;
        }
        return total;
    }
    std::vector<double> cuts;
    for (double level : {1e-15, 1e-6, 0.01, 0.25, 0.5, 0.75, 0.99, 1 - 1e-6, 1 - 1e-15}) {
        cuts.push_back(quantile(law, level));
    }
    const auto integrand = [&](double x) { return -density(law, x) * curvature(x); };
    return numeric::integrate(integrand, cuts, 1e-15, 1e-13).value;
}

ImproperDensity jeffreys_prior(const SamplingModel& m) {
    check_model(m);
    const Support dom = parameter_domain(m);
    const std::string name = model_name(m);
    switch (m.family) {
        case ModelFamily::Bernoulli:
        case ModelFamily::Binomial: {
            const Distribution b = Distribution::beta(0.5, 0.5);
            return {name, [b](double t) { return log_density(b, t); }, dom, true, b};
        }
        case ModelFamily::Poisson:
            return {name, [](double t) { return -0.5 * std::log(t); }, dom, false, std::nullopt};
        case ModelFamily::Exponential:
        case ModelFamily::NormalKnownMean:
            return {name, [](double t) { return -std::log(t); }, dom, false, std::nullopt};
        case ModelFamily::Geometric:
            return {name, [](double t) { return -std::log(t) - 0.5 * std::log1p(-t); }, dom, false,
                    std::nullopt};
        case ModelFamily::NormalKnownPrecision:
            return {name, [](double) { return 0.0; }, dom, false, std::nullopt};
        case ModelFamily::ContinuousUniform:
            not_regular();
    }
    not_regular();
}

Distribution jeffreys_posterior(const SamplingModel& m, const SampleSummary& data) {
    check_model(m);
    const double n = static_cast<double>(data.n);
    const auto improper = [&](const char* why) {
        throw ProprietyError(model_name(m) + ": Jeffreys posterior is improper (" + why + ")");
    };
    switch (m.family) {
        case ModelFamily::Bernoulli:
            if (data.sum < 0.0 || data.sum > n) throw DomainError("bernoulli: need 0 <= r <= n");
            return Distribution::beta(data.sum + 0.5, n - data.sum + 0.5);
        case ModelFamily::Binomial: {
            const double trials = n * m.trials;
            if (data.sum < 0.0 || data.sum > trials) throw DomainError("binomial: counts out of range");
            return Distribution::beta(data.sum + 0.5, trials - data.sum + 0.5);
        }
        case ModelFamily::Poisson:
            if (data.n == 0) improper("no observations");
            if (data.sum < 0.0) throw DomainError("poisson: counts must be nonnegative");
            return Distribution::gamma(data.sum + 0.5, n);
        case ModelFamily::Exponential:
            if (data.n == 0) improper("no observations");
            if (!(data.sum > 0.0)) improper("sum of observations must be positive");
            return Distribution::gamma(n, data.sum);
        case ModelFamily::Geometric:
            if (data.n == 0) improper("no observations");
            if (data.sum < 0.0) throw DomainError("geometric: counts must be nonnegative");
            return Distribution::beta(n, data.sum + 0.5);
        case ModelFamily::NormalKnownPrecision:
            if (data.n == 0) improper("no observations");
            return Distribution::normal_precision(data.sum / n, n * m.known);
        case ModelFamily::NormalKnownMean: {
            if (data.n == 0) improper("no observations");
            const double ss = data.sum_sq - 2.0 * m.known * data.sum + n * m.known * m.known;
            if (!(ss > 0.0)) improper("all observations equal the known mean");
            return Distribution::gamma(0.5 * n, 0.5 * ss);
        }
        case ModelFamily::ContinuousUniform:
            not_regular();
    }
    not_regular();
}

}  // namespace bayeskit
