#include "bayeskit/conjugate.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <memory>
#include <numbers>
#include <set>

#include "bayeskit/error.hpp"
#include "bayeskit/numeric.hpp"
#include "bayeskit/special.hpp"

namespace bayeskit {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct LikelihoodInfo {
    Likelihood likelihood;
    std::string_view name;
    Family prior;
};

constexpr std::array<LikelihoodInfo, 8> kLikelihoods = {{
    {Likelihood::Bernoulli, "bernoulli", Family::Beta},
    {Likelihood::Poisson, "poisson", Family::Gamma},
    {Likelihood::Geometric, "geometric", Family::Beta},
    {Likelihood::Exponential, "exponential", Family::Gamma},
    {Likelihood::ContinuousUniform, "uniform", Family::Pareto},
    {Likelihood::NormalKnownPrecision, "normal_known_precision", Family::NormalPrecision},
    {Likelihood::NormalKnownMean, "normal_known_mean", Family::Gamma},
    {Likelihood::NormalBoth, "normal", Family::NormalGamma},
}};

double log_normal(double x, double mu, double precision) {
    const double z = x - mu;
    return 0.5 * std::log(precision / (2.0 * std::numbers::pi)) - 0.5 * precision * z * z;
}

// Quantile levels used to split integrals against a parameter distribution.
constexpr std::array<double, 13> kSplitLevels = {1e-14, 1e-8, 1e-4, 0.01, 0.1, 0.25, 0.5,
                                                 0.75,  0.9,  0.99, 1 - 1e-4, 1 - 1e-8,
                                                 1 - 1e-14};

std::vector<double> split_points(const Distribution& d) {
    std::vector<double> pts;
    const Support s = support(d);
    if (std::isfinite(s.lower)) pts.push_back(s.lower);
    for (double level : kSplitLevels) pts.push_back(quantile(d, level));
    if (std::isfinite(s.upper)) pts.push_back(s.upper);
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    return pts;
}

// Integral of g(theta) * p(theta) over the bulk of the parameter distribution.
double integrate_against(const Distribution& param, const std::vector<double>& pts,
                         const std::function<double(double)>& g, double extra_break) {
    std::vector<double> cuts = pts;
    if (std::isfinite(extra_break) && extra_break > cuts.front() && extra_break < cuts.back()) {
        cuts.insert(std::upper_bound(cuts.begin(), cuts.end(), extra_break), extra_break);
    }
    const auto integrand = [&](double t) {
        const double lp = log_density(param, t);
        if (!std::isfinite(lp)) return 0.0;
        return g(t) * std::exp(lp);
    };
    const numeric::Quadrature q = numeric::integrate(integrand, cuts, 1e-15, 1e-11);
    if (!q.converged && q.error > 1e-8 * std::max(1.0, std::abs(q.value))) {
        throw NumericError("predictive: quadrature did not converge (achieved error " +
                           std::to_string(q.error) + ")");
    }
    return q.value;
}

Predictive numeric_predictive(const ConjugateModel& model) {
    const Distribution& prior = model.prior();
    switch (model.likelihood()) {
        case Likelihood::Bernoulli:
            return Predictive(Distribution::bernoulli(mean(prior)));
        case Likelihood::Poisson:
            return Predictive(Distribution::poisson_gamma(prior.param(0), prior.param(1), 1.0));
        case Likelihood::NormalBoth: {
            // The mean integrates out analytically; the precision is left to quadrature.
            const Distribution lambda = precision_marginal(prior);
            const double mu0 = prior.param(0);
            const double shrink = prior.param(1) / (prior.param(1) + 1.0);
            auto pts = std::make_shared<std::vector<double>>(split_points(lambda));
            auto f = [lambda, mu0, shrink, pts](double x) {
                return integrate_against(
                    lambda, *pts,
                    [&](double l) { return std::exp(log_normal(x, mu0, l * shrink)); }, kInf);
            };
            return Predictive(f, false, {-kInf, kInf});
        }
        default:
            break;
    }
    auto pts = std::make_shared<std::vector<double>>(split_points(prior));
    const Likelihood lik = model.likelihood();
    const bool discrete = lik == Likelihood::Geometric;
    const Support sup = (lik == Likelihood::NormalKnownPrecision || lik == Likelihood::NormalKnownMean)
                            ? Support{-kInf, kInf}
                            : Support{0.0, kInf};
    auto f = [model, prior, pts, lik](double x) {
        if (lik == Likelihood::Geometric && (x < 0.0 || std::floor(x) != x)) return 0.0;
        if ((lik == Likelihood::Exponential || lik == Likelihood::ContinuousUniform) && x < 0.0) {
            return 0.0;
        }
        const double brk = lik == Likelihood::ContinuousUniform ? x : kInf;
        return integrate_against(
            prior, *pts, [&](double t) { return std::exp(model.log_likelihood(x, t)); }, brk);
    };
    return Predictive(f, discrete, sup);
}

}  // namespace

std::string_view likelihood_name(Likelihood l) {
    for (const auto& info : kLikelihoods) {
        if (info.likelihood == l) return info.name;
    }
    return "unknown";
}

std::optional<Likelihood> parse_likelihood(std::string_view name) {
    for (const auto& info : kLikelihoods) {
        if (info.name == name) return info.likelihood;
    }
    return std::nullopt;
}

Family conjugate_family(Likelihood l) {
    for (const auto& info : kLikelihoods) {
        if (info.likelihood == l) return info.prior;
    }
    throw DomainError("unknown likelihood");
}

bool needs_known_constant(Likelihood l) {
    return l == Likelihood::NormalKnownPrecision || l == Likelihood::NormalKnownMean;
}

SampleSummary SampleSummary::from_data(std::span<const double> xs) {
    SampleSummary s;
    for (double x : xs) {
        if (!std::isfinite(x)) throw DomainError("sample contains a non-finite value");
        ++s.n;
        s.sum += x;
        s.sum_sq += x * x;
        s.max = std::max(s.max, x);
    }
    return s;
}

SampleSummary SampleSummary::binary(std::size_t n, std::size_t r) {
    if (r > n) throw DomainError("binary summary: successes exceed trials");
    SampleSummary s;
    s.n = n;
    s.sum = static_cast<double>(r);
    s.sum_sq = static_cast<double>(r);
    s.max = n == 0 ? -kInf : (r > 0 ? 1.0 : 0.0);
    return s;
}

SampleSummary SampleSummary::merged(const SampleSummary& other) const {
    return {n + other.n, sum + other.sum, sum_sq + other.sum_sq, std::max(max, other.max)};
}

ConjugateModel::ConjugateModel(Likelihood likelihood, Distribution prior, double known)
    : likelihood_(likelihood), prior_(prior), known_(known) {
    const Family expected = conjugate_family(likelihood);
    if (prior.family() != expected) {
        throw DomainError("likelihood '" + std::string(likelihood_name(likelihood)) +
                          "' requires a " + std::string(family_name(expected)) + " prior, got " +
                          std::string(family_name(prior.family())));
    }
    if (likelihood == Likelihood::NormalKnownPrecision && !(known > 0.0)) {
        throw DomainError("normal_known_precision requires a known precision > 0");
    }
    if (likelihood == Likelihood::NormalKnownMean && !std::isfinite(known)) {
        throw DomainError("normal_known_mean requires a finite known mean");
    }
}

double ConjugateModel::log_likelihood(double x, double theta) const {
    switch (likelihood_) {
        case Likelihood::Bernoulli:
            if (x == 1.0) return std::log(theta);
            if (x == 0.0) return std::log1p(-theta);
            return -kInf;
        case Likelihood::Poisson:
            if (x < 0.0 || std::floor(x) != x) return -kInf;
            return x * std::log(theta) - theta - special::log_factorial(x);
        case Likelihood::Geometric:
            if (x < 0.0 || std::floor(x) != x) return -kInf;
            return std::log(theta) + x * std::log1p(-theta);
        case Likelihood::Exponential:
            if (x < 0.0) return -kInf;
            return std::log(theta) - theta * x;
        case Likelihood::ContinuousUniform:
            if (x < 0.0 || x > theta) return -kInf;
            return -std::log(theta);
        case Likelihood::NormalKnownPrecision:
            return log_normal(x, theta, known_);
        case Likelihood::NormalKnownMean:
            return log_normal(x, known_, theta);
        case Likelihood::NormalBoth:
            throw DomainError("normal: the parameter is two-dimensional");
    }
    return -kInf;
}

void validate_data(Likelihood likelihood, std::span<const double> xs) {
    for (double x : xs) {
        if (!std::isfinite(x)) throw DomainError("data contains a non-finite value");
        const bool integral = std::floor(x) == x;
        switch (likelihood) {
            case Likelihood::Bernoulli:
                if (x != 0.0 && x != 1.0) throw DomainError("bernoulli data must be 0 or 1");
                break;
            case Likelihood::Poisson:
            case Likelihood::Geometric:
                if (x < 0.0 || !integral) {
                    throw DomainError(std::string(likelihood_name(likelihood)) +
                                      " data must be nonnegative integers");
                }
                break;
            case Likelihood::Exponential:
            case Likelihood::ContinuousUniform:
                if (x < 0.0) {
                    throw DomainError(std::string(likelihood_name(likelihood)) +
                                      " data must be nonnegative");
                }
                break;
            default:
                break;
        }
    }
}

Predictive::Predictive(Distribution closed) : closed_(closed), discrete_(closed.is_discrete()) {
    support_ = bayeskit::support(closed);
}

Predictive::Predictive(std::function<double(double)> density, bool discrete, Support support)
    : density_(std::move(density)), discrete_(discrete), support_(support) {}

const Distribution& Predictive::distribution() const {
    if (!closed_) throw DomainError("predictive has no closed form");
    return *closed_;
}

double Predictive::density(double x) const {
    if (closed_) return bayeskit::density(*closed_, x);
    return density_(x);
}

Distribution posterior(const ConjugateModel& model, const SampleSummary& data) {
    const Distribution& prior = model.prior();
    const double n = static_cast<double>(data.n);
    if (data.n == 0) return prior;
    const auto p = prior.params();
    switch (model.likelihood()) {
        case Likelihood::Bernoulli:
            if (data.sum < 0.0 || data.sum > n) throw DomainError("posterior: need 0 <= r <= n");
            return Distribution::beta(p[0] + data.sum, p[1] + n - data.sum);
        case Likelihood::Poisson:
            if (data.sum < 0.0) throw DomainError("posterior: poisson counts must be nonnegative");
            return Distribution::gamma(p[0] + data.sum, p[1] + n);
        case Likelihood::Geometric:
            if (data.sum < 0.0) throw DomainError("posterior: geometric counts must be nonnegative");
            return Distribution::beta(p[0] + n, p[1] + data.sum);
        case Likelihood::Exponential:
            if (data.sum < 0.0) throw DomainError("posterior: exponential data must be nonnegative");
            return Distribution::gamma(p[0] + n, p[1] + data.sum);
        case Likelihood::ContinuousUniform:
            if (data.max < 0.0) throw DomainError("posterior: uniform data must be nonnegative");
            return Distribution::pareto(p[0] + n, std::max(p[1], data.max));
        case Likelihood::NormalKnownPrecision: {
            const double lambda = model.known();
            const double prec = p[1] + n * lambda;
            return Distribution::normal_precision((p[1] * p[0] + lambda * data.sum) / prec, prec);
        }
        case Likelihood::NormalKnownMean: {
            const double mu = model.known();
            const double ss = std::max(0.0, data.sum_sq - 2.0 * mu * data.sum + n * mu * mu);
            return Distribution::gamma(p[0] + 0.5 * n, p[1] + 0.5 * ss);
        }
        case Likelihood::NormalBoth: {
            const double mu0 = p[0], n0 = p[1], a = p[2], b = p[3];
            const double xbar = data.sum / n;
            const double ss = std::max(0.0, data.sum_sq - n * xbar * xbar);
            const double dev = xbar - mu0;
            return Distribution::normal_gamma((n0 * mu0 + n * xbar) / (n0 + n), n0 + n, a + 0.5 * n,
                                              b + 0.5 * ss + n0 * n * dev * dev / (2.0 * (n0 + n)));
        }
    }
    return prior;
}

Predictive prior_predictive(const ConjugateModel& model) { return numeric_predictive(model); }

Predictive posterior_predictive(const ConjugateModel& model, const SampleSummary& data) {
    return prior_predictive(model.with_prior(posterior(model, data)));
}

GridPrior::GridPrior(std::vector<double> sup, ProbVector w)
    : support(std::move(sup)), weights(std::move(w)) {
    if (support.size() != weights.size()) throw DomainError("GridPrior: support/weight size mismatch");
    if (!weights.strictly_positive()) throw DomainError("GridPrior: weights must be strictly positive");
    if (std::set<double>(support.begin(), support.end()).size() != support.size()) {
        throw DomainError("GridPrior: support values must be distinct");
    }
    for (double t : support) {
        if (!std::isfinite(t)) throw DomainError("GridPrior: support values must be finite");
    }
}

GridPrior::GridPrior(std::vector<double> sup, std::vector<double> w)
    : GridPrior(std::move(sup),
                ProbVector(Eigen::Map<Eigen::VectorXd>(w.data(), static_cast<Eigen::Index>(w.size())))) {}

double GridLikelihood::log_density(double x, double theta) const {
    switch (family) {
        case GridFamily::Bernoulli:
            return bayeskit::log_density(Distribution::bernoulli(theta), x);
        case GridFamily::Binomial:
            return bayeskit::log_density(Distribution::binomial(trials, theta), x);
        case GridFamily::Poisson:
            return bayeskit::log_density(Distribution::poisson(theta), x);
        case GridFamily::Geometric:
            return bayeskit::log_density(Distribution::geometric(theta), x);
        case GridFamily::Exponential:
            return bayeskit::log_density(Distribution::gamma(1.0, theta), x);
    }
    return -kInf;
}

GridPrior grid_posterior(const GridPrior& prior, const GridLikelihood& likelihood,
                         std::span<const double> data) {
    const std::size_t k = prior.support.size();
    Eigen::VectorXd logw(static_cast<Eigen::Index>(k));
    for (std::size_t j = 0; j < k; ++j) {
        double acc = std::log(prior.weights[j]);
        for (double x : data) acc += likelihood.log_density(x, prior.support[j]);
        logw(static_cast<Eigen::Index>(j)) = acc;
    }
    const double top = logw.maxCoeff();
    if (!std::isfinite(top)) {
        throw NumericError("grid_posterior: data have zero likelihood at every support point");
    }
    Eigen::VectorXd w = (logw.array() - top).exp().matrix();
    std::vector<double> sup;
    std::vector<std::string> labels;
    std::vector<double> kept;
    // Support points ruled out by the data are dropped so the weights stay strictly positive.
    for (std::size_t j = 0; j < k; ++j) {
        if (w(static_cast<Eigen::Index>(j)) > 0.0) {
            sup.push_back(prior.support[j]);
            labels.push_back(prior.weights.labels()[j]);
            kept.push_back(w(static_cast<Eigen::Index>(j)));
        }
    }
    Eigen::VectorXd kw = Eigen::Map<Eigen::VectorXd>(kept.data(), static_cast<Eigen::Index>(kept.size()));
    return GridPrior(std::move(sup), ProbVector::normalized(std::move(labels), std::move(kw)));
}

ProbVector grid_predictive(const GridPrior& prior, const GridLikelihood& likelihood) {
    int outcomes = 0;
    switch (likelihood.family) {
        case GridFamily::Bernoulli: outcomes = 2; break;
        case GridFamily::Binomial: outcomes = likelihood.trials + 1; break;
        default:
            throw DomainError("grid_predictive: requires a finite outcome space (bernoulli or binomial)");
    }
    Eigen::VectorXd p = Eigen::VectorXd::Zero(outcomes);
    for (int x = 0; x < outcomes; ++x) {
        for (std::size_t j = 0; j < prior.support.size(); ++j) {
            p(x) += prior.weights[j] * std::exp(likelihood.log_density(x, prior.support[j]));
        }
    }
    return ProbVector::normalized(default_labels(static_cast<std::size_t>(outcomes)), p);
}

double fair_bet_ratio(const ProbVector& predictive) {
    const double p0 = predictive.at("0");
    if (!(p0 > 0.0)) throw DomainError("fair_bet_ratio: p(0) must be positive");
    return predictive.at("1") / p0;
}

double event_posterior(double prior_b, double p_a_given_b, double p_a_given_not_b) {
    for (double v : {prior_b, p_a_given_b, p_a_given_not_b}) {
        if (!(v >= 0.0 && v <= 1.0)) throw DomainError("event_posterior: arguments must lie in [0, 1]");
    }
    const double joint = p_a_given_b * prior_b;
    const double denom = joint + p_a_given_not_b * (1.0 - prior_b);
    if (!(denom > 0.0)) throw DomainError("event_posterior: evidence has zero probability");
    return joint / denom;
}

}  // namespace bayeskit
