#include "bayeskit/scoring.hpp"

#include <cmath>
#include <vector>

#include "bayeskit/error.hpp"
#include "bayeskit/numeric.hpp"
#include "bayeskit/special.hpp"

namespace bayeskit {
namespace {

double offset(const ScoreRule& rule, std::size_t j, std::size_t m) {
    if (rule.B.size() == 0) return 0.0;
    if (static_cast<std::size_t>(rule.B.size()) != m) {
        throw DomainError("score: offsets B must have one entry per outcome");
    }
    return rule.B(static_cast<Eigen::Index>(j));
}

void same_labels(const ProbVector& p, const ProbVector& q, const char* what) {
    if (p.labels() != q.labels()) throw DomainError(std::string(what) + ": label sets differ");
}

// Terms p log(p/q) with the limit convention at p = 0.
double kl_term(double p, double q) {
    if (p == 0.0) return 0.0;
    if (!(q > 0.0)) throw DomainError("log_discrepancy: q is zero where p is positive");
    return p * std::log(p / q);
}

}  // namespace

ScoreRule ScoreRule::quadratic(double A, Eigen::VectorXd B) {
    if (!(A > 0.0)) throw DomainError("ScoreRule: A must be positive");
    return {Kind::Quadratic, A, std::move(B)};
}

ScoreRule ScoreRule::logarithmic(double A, Eigen::VectorXd B) {
    if (!(A > 0.0)) throw DomainError("ScoreRule: A must be positive");
    return {Kind::Logarithmic, A, std::move(B)};
}

double score(const ScoreRule& rule, const ProbVector& q, std::size_t occurred) {
    if (occurred >= q.size()) throw DomainError("score: outcome index out of range");
    const double b = offset(rule, occurred, q.size());
    const double qj = q[occurred];
    if (rule.kind == ScoreRule::Kind::Quadratic) {
        return rule.A * (2.0 * qj - q.weights().squaredNorm()) + b;
    }
    if (!(qj > 0.0)) {
        throw DomainError("score: logarithmic rule is unbounded below at zero probability");
    }
    return rule.A * std::log(qj) + b;
}

double score(const ScoreRule& rule, const ProbVector& q, const std::string& occurred) {
    return score(rule, q, q.index_of(occurred));
}

ScoreRule exam_rule(int m) {
    if (m < 2) throw DomainError("exam_rule: need at least two options");
    const double md = m;
    return ScoreRule::quadratic(md / (md - 1.0), Eigen::VectorXd::Constant(m, -1.0 / (md - 1.0)));
}

double expected_score(const ScoreRule& rule, const ProbVector& q, const ProbVector& p) {
    same_labels(p, q, "expected_score");
    double total = 0.0;
    for (std::size_t j = 0; j < p.size(); ++j) {
        if (p[j] > 0.0) total += p[j] * score(rule, q, j);
    }
    return total;
}

double log_discrepancy(const ProbVector& p, const ProbVector& q) {
    same_labels(p, q, "log_discrepancy");
    double total = 0.0;
    for (std::size_t j = 0; j < p.size(); ++j) total += kl_term(p[j], q[j]);
    return std::max(0.0, total);
}

double log_discrepancy(const std::function<double(double)>& log_p,
                       const std::function<double(double)>& log_q, double lower, double upper) {
    const auto integrand = [&](double x) {
        const double lp = log_p(x);
        if (!std::isfinite(lp)) return 0.0;
        const double lq = log_q(x);
        if (!std::isfinite(lq)) throw DomainError("log_discrepancy: q vanishes where p is positive");
        return std::exp(lp) * (lp - lq);
    };
    return numeric::integrate_or_throw(integrand, lower, upper, 1e-12, 1e-10, "log_discrepancy");
}

double log_discrepancy(const Distribution& p, const Distribution& q) {
    if (p.is_discrete() != q.is_discrete()) {
        throw DomainError("log_discrepancy: cannot compare a discrete and a continuous law");
    }
    if (p.is_discrete()) {
        const double upper = support(p).upper;
        double total = 0.0, mass = 0.0;
        const double centre = mean(p);
        for (double x = 0.0; x <= upper; x += 1.0) {
            const double lp = log_density(p, x);
            if (!std::isfinite(lp)) continue;
            const double px = std::exp(lp);
            const double lq = log_density(q, x);
            if (!std::isfinite(lq)) throw DomainError("log_discrepancy: q vanishes where p is positive");
            total += px * (lp - lq);
            mass += px;
            if (x > centre && 1.0 - mass < 1e-16) break;
        }
        return std::max(0.0, total);
    }
    std::vector<double> cuts;
    for (double level : {1e-12, 1e-8, 1e-4, 0.01, 0.1, 0.5, 0.9, 0.99, 1 - 1e-4, 1 - 1e-8, 1 - 1e-12}) {
        cuts.push_back(quantile(p, level));
    }
    const auto integrand = [&](double x) {
        const double lp = log_density(p, x);
        if (!std::isfinite(lp)) return 0.0;
        const double lq = log_density(q, x);
        if (!std::isfinite(lq)) throw DomainError("log_discrepancy: q vanishes where p is positive");
        return std::exp(lp) * (lp - lq);
    };
    const numeric::Quadrature r = numeric::integrate(integrand, cuts, 1e-13, 1e-10);
    if (!r.converged && r.error > 1e-8) {
        throw NumericError("log_discrepancy: quadrature did not converge (achieved error " +
                           std::to_string(r.error) + ")");
    }
    return std::max(0.0, r.value);
}

double symmetric_discrepancy(const ProbVector& p, const ProbVector& q) {
    return log_discrepancy(p, q) + log_discrepancy(q, p);
}

double binomial_poisson_discrepancy(int n, double theta) {
    if (n < 1) throw DomainError("binomial_poisson_discrepancy: n must be at least 1");
    if (!(theta > 0.0 && theta < 1.0)) {
        throw DomainError("binomial_poisson_discrepancy: theta must lie in (0, 1)");
    }
    const double nd = n;
    double log_terms = 0.0;
    for (int k = 2; k <= n; ++k) log_terms += std::log(static_cast<double>(k));
    // phi = E[log (n - X)!] for X ~ Binomial(n, theta).
    double phi = 0.0;
    for (int k = 2; k <= n; ++k) {
        const double kd = k;
        const double log_weight = special::log_factorial(nd) - special::log_factorial(kd) -
                                  special::log_factorial(nd - kd) + (nd - kd) * std::log(theta) +
                                  kd * std::log1p(-theta);
        phi += std::exp(log_weight) * special::log_factorial(kd);
    }
    const double value =
        log_terms + nd * ((1.0 - theta) * std::log1p(-theta) + theta * (1.0 - std::log(nd))) - phi;
    return std::max(0.0, value);
}

Distribution best_normal_approx(double m, double v) {
    if (!(v > 0.0) || !std::isfinite(v)) throw DomainError("best_normal_approx: variance must be positive");
    return Distribution::normal_precision(m, 1.0 / v);
}

Distribution best_normal_approx(const Distribution& target) {
    const Moments mo = moments(target);
    return best_normal_approx(mo.mean, mo.variance);
}

double info_of_data(const ProbVector& prior, const ProbVector& posterior) {
    if (!prior.strictly_positive()) throw DomainError("info_of_data: prior must be strictly positive");
    return log_discrepancy(posterior, prior);
}

double info_of_data(const Distribution& prior, const Distribution& posterior) {
    return log_discrepancy(posterior, prior);
}

double expected_info_of_experiment(const ProbVector& prior, const ProbVector& marginals,
                                   const std::vector<ProbVector>& posteriors) {
    if (posteriors.size() != marginals.size()) {
        throw DomainError("expected_info_of_experiment: one posterior per outcome is required");
    }
    double total = 0.0;
    for (std::size_t i = 0; i < posteriors.size(); ++i) {
        if (marginals[i] > 0.0) total += marginals[i] * info_of_data(prior, posteriors[i]);
    }
    return total;
}

}  // namespace bayeskit
