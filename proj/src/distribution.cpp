#include "bayeskit/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "bayeskit/error.hpp"
#include "bayeskit/numeric.hpp"
#include "bayeskit/random.hpp"
#include "bayeskit/special.hpp"

namespace bayeskit {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

struct FamilyInfo {
    Family family;
    std::string_view name;
    std::size_t arity;
};

constexpr std::array<FamilyInfo, 11> kFamilies = {{
    {Family::Beta, "Beta", 2},
    {Family::Gamma, "Gamma", 2},
    {Family::NormalPrecision, "NormalPrecision", 2},
    {Family::Pareto, "Pareto", 2},
    {Family::Poisson, "Poisson", 1},
    {Family::Binomial, "Binomial", 2},
    {Family::Bernoulli, "Bernoulli", 1},
    {Family::Geometric, "Geometric", 1},
    {Family::ContinuousUniform, "ContinuousUniform", 1},
    {Family::PoissonGamma, "PoissonGamma", 3},
    {Family::NormalGamma, "NormalGamma", 4},
}};

void require(bool ok, Family f, const char* what) {
    if (!ok) {
        throw DomainError(std::string(family_name(f)) + ": " + what);
    }
}

bool is_integer(double x) { return std::floor(x) == x; }

void check_x(double x) {
    if (std::isnan(x)) throw DomainError("argument is NaN");
}

// Smallest integer k >= 0 with F(k) >= p, for a nondecreasing F on {0, 1, ...}.
template <class Cdf>
double discrete_search(Cdf F, double p, double guess, double upper_limit) {
    double lo = -1.0;
    double hi = std::max(0.0, std::floor(guess));
    if (hi > upper_limit) hi = upper_limit;
    while (F(hi) < p) {
        lo = hi;
        if (hi >= upper_limit) return upper_limit;
        hi = std::min(upper_limit, std::max(1.0, 2.0 * hi));
    }
    while (hi - lo > 1.0) {
        const double mid = std::floor(0.5 * (lo + hi));
        if (F(mid) >= p) hi = mid; else lo = mid;
    }
    return hi;
}

double continuous_quantile(const Distribution& d, double p) {
    const Support s = support(d);
    double lo = s.lower;
    double hi = s.upper;
    if (!std::isfinite(hi)) {
        const Moments m = moments(d);
        hi = m.mean + 10.0 * std::sqrt(m.variance);
        if (!(hi > lo)) hi = lo + 1.0;
        while (cdf(d, hi) < p) {
            lo = hi;
            hi *= 2.0;
        }
    }
    const auto f = [&](double x) { return cdf(d, x) - p; };
    const auto df = [&](double x) { return density(d, x); };
    return numeric::safeguarded_newton(f, df, lo, hi, 1e-15);
}

double gamma_sample(double shape, CounterRng& rng) {
    // Marsaglia-Tsang; shapes below one use the U^(1/a) boost.
    if (shape < 1.0) {
        const double u = rng.uniform();
        return gamma_sample(shape + 1.0, rng) * std::pow(u, 1.0 / shape);
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        double x, v;
        do {
            x = rng.standard_normal();
            v = 1.0 + c * x;
        } while (v <= 0.0);
        v = v * v * v;
        const double u = rng.uniform();
        if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
        if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
    }
}

}  // namespace

std::string_view family_name(Family f) {
    for (const auto& info : kFamilies) {
        if (info.family == f) return info.name;
    }
    return "Unknown";
}

std::optional<Family> parse_family(std::string_view name) {
    std::string lowered(name);
    std::transform(lowered.begin(), lowered.end(), lowered.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    for (const auto& info : kFamilies) {
        std::string candidate(info.name);
        std::transform(candidate.begin(), candidate.end(), candidate.begin(),
                       [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
        if (candidate == lowered) return info.family;
    }
    if (lowered == "normal") return Family::NormalPrecision;
    if (lowered == "uniform") return Family::ContinuousUniform;
    return std::nullopt;
}

std::size_t family_arity(Family f) {
    for (const auto& info : kFamilies) {
        if (info.family == f) return info.arity;
    }
    return 0;
}

Distribution::Distribution(Family family, std::span<const double> params)
    : family_(family), arity_(params.size()) {
    std::copy(params.begin(), params.end(), params_.begin());
}

Distribution Distribution::make(Family f, std::span<const double> p) {
    if (p.size() != family_arity(f)) {
        throw DomainError(std::string(family_name(f)) + ": expected " +
                          std::to_string(family_arity(f)) + " parameters, got " +
                          std::to_string(p.size()));
    }
    for (double v : p) require(std::isfinite(v), f, "parameters must be finite");
    switch (f) {
        case Family::Beta:
            require(p[0] > 0 && p[1] > 0, f, "requires alpha > 0 and beta > 0");
            break;
        case Family::Gamma:
            require(p[0] > 0 && p[1] > 0, f, "requires shape > 0 and rate > 0");
            break;
        case Family::NormalPrecision:
            require(p[1] > 0, f, "requires precision > 0");
            break;
        case Family::Pareto:
            require(p[0] > 0 && p[1] > 0, f, "requires alpha > 0 and scale > 0");
            break;
        case Family::Poisson:
            require(p[0] > 0, f, "requires rate > 0");
            break;
        case Family::Binomial:
            require(p[0] >= 1 && is_integer(p[0]), f, "trials must be a positive integer");
            require(p[1] > 0 && p[1] < 1, f, "requires 0 < theta < 1");
            break;
        case Family::Bernoulli:
        case Family::Geometric:
            require(p[0] > 0 && p[0] < 1, f, "requires 0 < theta < 1");
            break;
        case Family::ContinuousUniform:
            require(p[0] > 0, f, "requires upper > 0");
            break;
        case Family::PoissonGamma:
            require(p[0] > 0 && p[1] > 0 && p[2] > 0, f, "requires alpha, beta, n > 0");
            break;
        case Family::NormalGamma:
            require(p[1] > 0 && p[2] > 0 && p[3] > 0, f, "requires n0, alpha, beta > 0");
            break;
    }
    return Distribution(f, p);
}

Distribution Distribution::beta(double a, double b) {
    const double p[] = {a, b};
    return make(Family::Beta, p);
}
Distribution Distribution::gamma(double shape, double rate) {
    const double p[] = {shape, rate};
    return make(Family::Gamma, p);
}
Distribution Distribution::normal_precision(double mean, double precision) {
    const double p[] = {mean, precision};
    return make(Family::NormalPrecision, p);
}
Distribution Distribution::pareto(double alpha, double scale) {
    const double p[] = {alpha, scale};
    return make(Family::Pareto, p);
}
Distribution Distribution::poisson(double rate) {
    const double p[] = {rate};
    return make(Family::Poisson, p);
}
Distribution Distribution::binomial(int trials, double theta) {
    const double p[] = {static_cast<double>(trials), theta};
    return make(Family::Binomial, p);
}
Distribution Distribution::bernoulli(double theta) {
    const double p[] = {theta};
    return make(Family::Bernoulli, p);
}
Distribution Distribution::geometric(double theta) {
    const double p[] = {theta};
    return make(Family::Geometric, p);
}
Distribution Distribution::continuous_uniform(double upper) {
    const double p[] = {upper};
    return make(Family::ContinuousUniform, p);
}
Distribution Distribution::poisson_gamma(double alpha, double beta, double n) {
    const double p[] = {alpha, beta, n};
    return make(Family::PoissonGamma, p);
}
Distribution Distribution::normal_gamma(double mu0, double n0, double alpha, double beta) {
    const double p[] = {mu0, n0, alpha, beta};
    return make(Family::NormalGamma, p);
}

bool Distribution::is_discrete() const {
    switch (family_) {
        case Family::Poisson:
        case Family::Binomial:
        case Family::Bernoulli:
        case Family::Geometric:
        case Family::PoissonGamma:
            return true;
        default:
            return false;
    }
}

std::string describe(const Distribution& d) {
    std::ostringstream out;
    out.precision(10);
    out << family_name(d.family()) << '(';
    const auto p = d.params();
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (i) out << ", ";
        out << p[i];
    }
    out << ')';
    return out.str();
}

double log_density(const Distribution& d, double x) {
    check_x(x);
    const auto p = d.params();
    switch (d.family()) {
        case Family::Beta: {
            const double a = p[0], b = p[1];
            if (x < 0.0 || x > 1.0) return kNegInf;
            if (x == 0.0) return a < 1.0 ? kInf : (a == 1.0 ? std::log(b) : kNegInf);
            if (x == 1.0) return b < 1.0 ? kInf : (b == 1.0 ? std::log(a) : kNegInf);
            return (a - 1.0) * std::log(x) + (b - 1.0) * std::log1p(-x) - special::log_beta(a, b);
        }
        case Family::Gamma: {
            const double a = p[0], b = p[1];
            if (x < 0.0) return kNegInf;
            if (x == 0.0) return a < 1.0 ? kInf : (a == 1.0 ? std::log(b) : kNegInf);
            return a * std::log(b) - special::log_gamma(a) + (a - 1.0) * std::log(x) - b * x;
        }
        case Family::NormalPrecision: {
            const double z = x - p[0];
            return 0.5 * std::log(p[1] / (2.0 * std::numbers::pi)) - 0.5 * p[1] * z * z;
        }
        case Family::Pareto:
            if (x < p[1]) return kNegInf;
            return std::log(p[0]) + p[0] * std::log(p[1]) - (p[0] + 1.0) * std::log(x);
        case Family::Poisson:
            if (x < 0.0 || !is_integer(x)) return kNegInf;
            return x * std::log(p[0]) - p[0] - special::log_factorial(x);
        case Family::Binomial: {
            const double m = p[0], t = p[1];
            if (x < 0.0 || x > m || !is_integer(x)) return kNegInf;
            return special::log_factorial(m) - special::log_factorial(x) -
                   special::log_factorial(m - x) + x * std::log(t) + (m - x) * std::log1p(-t);
        }
        case Family::Bernoulli:
            if (x == 1.0) return std::log(p[0]);
            if (x == 0.0) return std::log1p(-p[0]);
            return kNegInf;
        case Family::Geometric:
            if (x < 0.0 || !is_integer(x)) return kNegInf;
            return std::log(p[0]) + x * std::log1p(-p[0]);
        case Family::ContinuousUniform:
            if (x < 0.0 || x > p[0]) return kNegInf;
            return -std::log(p[0]);
        case Family::PoissonGamma: {
            const double a = p[0], b = p[1], n = p[2];
            if (x < 0.0 || !is_integer(x)) return kNegInf;
            return a * std::log(b) - special::log_gamma(a) + special::log_gamma(a + x) -
                   special::log_factorial(x) + x * std::log(n) - (a + x) * std::log(b + n);
        }
        case Family::NormalGamma:
            throw DomainError("NormalGamma: use normal_gamma_density for the joint density");
    }
    return kNegInf;
}

double density(const Distribution& d, double x) { return std::exp(log_density(d, x)); }

double cdf(const Distribution& d, double x) {
    check_x(x);
    const auto p = d.params();
    switch (d.family()) {
        case Family::Beta:
            return special::beta_inc(p[0], p[1], x);
        case Family::Gamma:
            return x <= 0.0 ? 0.0 : special::gamma_p(p[0], p[1] * x);
        case Family::NormalPrecision:
            return special::normal_cdf((x - p[0]) * std::sqrt(p[1]));
        case Family::Pareto:
            return x <= p[1] ? 0.0 : -std::expm1(p[0] * std::log(p[1] / x));
        case Family::Poisson:
            return x < 0.0 ? 0.0 : special::gamma_q(std::floor(x) + 1.0, p[0]);
        case Family::Binomial: {
            if (x < 0.0) return 0.0;
            const double k = std::floor(x);
            if (k >= p[0]) return 1.0;
            return special::beta_inc(p[0] - k, k + 1.0, 1.0 - p[1]);
        }
        case Family::Bernoulli:
            return x < 0.0 ? 0.0 : (x < 1.0 ? 1.0 - p[0] : 1.0);
        case Family::Geometric:
            return x < 0.0 ? 0.0 : -std::expm1((std::floor(x) + 1.0) * std::log1p(-p[0]));
        case Family::ContinuousUniform:
            return std::clamp(x / p[0], 0.0, 1.0);
        case Family::PoissonGamma:
            if (x < 0.0) return 0.0;
            return special::beta_inc(p[0], std::floor(x) + 1.0, p[1] / (p[1] + p[2]));
        case Family::NormalGamma:
            throw DomainError("NormalGamma: no univariate distribution function");
    }
    return 0.0;
}

double quantile(const Distribution& d, double prob) {
    if (!(prob > 0.0 && prob < 1.0)) throw DomainError("quantile: p must lie in (0, 1)");
    const auto p = d.params();
    switch (d.family()) {
        case Family::NormalPrecision:
            return p[0] + special::normal_quantile(prob) / std::sqrt(p[1]);
        case Family::Pareto:
            return p[1] * std::exp(-std::log1p(-prob) / p[0]);
        case Family::ContinuousUniform:
            return prob * p[0];
        case Family::Beta:
        case Family::Gamma:
            return continuous_quantile(d, prob);
        case Family::Bernoulli:
            return prob <= 1.0 - p[0] ? 0.0 : 1.0;
        case Family::Geometric: {
            const auto F = [&](double k) { return cdf(d, k); };
            const double guess = std::ceil(std::log1p(-prob) / std::log1p(-p[0]) - 1.0);
            return discrete_search(F, prob, std::max(0.0, guess), kInf);
        }
        case Family::Poisson:
        case Family::Binomial:
        case Family::PoissonGamma: {
            const auto F = [&](double k) { return cdf(d, k); };
            const Moments m = moments(d);
            const double upper = d.family() == Family::Binomial ? p[0] : kInf;
            return discrete_search(F, prob, m.mean, upper);
        }
        case Family::NormalGamma:
            throw DomainError("NormalGamma: no univariate quantile");
    }
    return 0.0;
}

double mean(const Distribution& d) {
    const auto p = d.params();
    switch (d.family()) {
        case Family::Beta: return p[0] / (p[0] + p[1]);
        case Family::Gamma: return p[0] / p[1];
        case Family::NormalPrecision: return p[0];
        case Family::Pareto:
            if (!(p[0] > 1.0)) throw MomentError("Pareto: mean requires alpha > 1");
            return p[0] * p[1] / (p[0] - 1.0);
        case Family::Poisson: return p[0];
        case Family::Binomial: return p[0] * p[1];
        case Family::Bernoulli: return p[0];
        case Family::Geometric: return (1.0 - p[0]) / p[0];
        case Family::ContinuousUniform: return 0.5 * p[0];
        case Family::PoissonGamma: return p[2] * p[0] / p[1];
        case Family::NormalGamma:
            if (!(p[2] > 0.5)) throw MomentError("NormalGamma: mean of mu requires alpha > 1/2");
            return p[0];
    }
    return 0.0;
}

double variance(const Distribution& d) {
    const auto p = d.params();
    switch (d.family()) {
        case Family::Beta: {
            const double s = p[0] + p[1];
            return p[0] * p[1] / (s * s * (s + 1.0));
        }
        case Family::Gamma: return p[0] / (p[1] * p[1]);
        case Family::NormalPrecision: return 1.0 / p[1];
        case Family::Pareto: {
            if (!(p[0] > 2.0)) throw MomentError("Pareto: variance requires alpha > 2");
            const double am1 = p[0] - 1.0;
            return p[1] * p[1] * p[0] / (am1 * am1 * (p[0] - 2.0));
        }
        case Family::Poisson: return p[0];
        case Family::Binomial: return p[0] * p[1] * (1.0 - p[1]);
        case Family::Bernoulli: return p[0] * (1.0 - p[0]);
        case Family::Geometric: return (1.0 - p[0]) / (p[0] * p[0]);
        case Family::ContinuousUniform: return p[0] * p[0] / 12.0;
        case Family::PoissonGamma: {
            const double m = p[2] * p[0] / p[1];
            return m * (1.0 + p[2] / p[1]);
        }
        case Family::NormalGamma:
            if (!(p[2] > 1.0)) throw MomentError("NormalGamma: variance of mu requires alpha > 1");
            return p[3] / (p[1] * (p[2] - 1.0));
    }
    return 0.0;
}

Moments moments(const Distribution& d) { return {mean(d), variance(d)}; }

Support support(const Distribution& d) {
    const auto p = d.params();
    switch (d.family()) {
        case Family::Beta: return {0.0, 1.0};
        case Family::Gamma: return {0.0, kInf};
        case Family::NormalPrecision: return {kNegInf, kInf};
        case Family::Pareto: return {p[1], kInf};
        case Family::Poisson: return {0.0, kInf};
        case Family::Binomial: return {0.0, p[0]};
        case Family::Bernoulli: return {0.0, 1.0};
        case Family::Geometric: return {0.0, kInf};
        case Family::ContinuousUniform: return {0.0, p[0]};
        case Family::PoissonGamma: return {0.0, kInf};
        case Family::NormalGamma: return {kNegInf, kInf};
    }
    return {kNegInf, kInf};
}

std::vector<double> sample(const Distribution& d, std::size_t count, std::uint64_t seed) {
    if (d.family() == Family::NormalGamma) {
        throw DomainError("NormalGamma: sampling a joint law is not supported");
    }
    CounterRng rng(seed);
    std::vector<double> out;
    out.reserve(count);
    const auto p = d.params();
    for (std::size_t i = 0; i < count; ++i) {
        switch (d.family()) {
            case Family::Gamma:
                out.push_back(gamma_sample(p[0], rng) / p[1]);
                break;
            case Family::Beta: {
                const double x = gamma_sample(p[0], rng);
                const double y = gamma_sample(p[1], rng);
                out.push_back(x / (x + y));
                break;
            }
            default:
                out.push_back(quantile(d, rng.uniform()));
                break;
        }
    }
    return out;
}

double normal_gamma_density(const Distribution& d, double mu, double lambda) {
    if (d.family() != Family::NormalGamma) throw DomainError("normal_gamma_density: wrong family");
    if (!(lambda > 0.0)) return 0.0;
    const auto p = d.params();
    const Distribution cond = Distribution::normal_precision(p[0], p[1] * lambda);
    const Distribution prec = Distribution::gamma(p[2], p[3]);
    return std::exp(log_density(cond, mu) + log_density(prec, lambda));
}

Distribution precision_marginal(const Distribution& d) {
    if (d.family() != Family::NormalGamma) throw DomainError("precision_marginal: wrong family");
    return Distribution::gamma(d.param(2), d.param(3));
}

}  // namespace bayeskit
