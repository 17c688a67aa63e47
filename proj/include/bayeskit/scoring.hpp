#pragma once

#include <Eigen/Dense>
#include <functional>
#include <string>
#include <vector>

#include "bayeskit/distribution.hpp"
#include "bayeskit/prob_vector.hpp"

namespace bayeskit {

struct ScoreRule {
    enum class Kind { Quadratic, Logarithmic };

    Kind kind = Kind::Quadratic;
    double A = 1.0;
    Eigen::VectorXd B;  // per-outcome offsets; empty means all zero

    static ScoreRule quadratic(double A = 1.0, Eigen::VectorXd B = {});
    static ScoreRule logarithmic(double A = 1.0, Eigen::VectorXd B = {});
};

// Quadratic: A * (2 q_j - sum_i q_i^2) + B_j. Logarithmic: A * log q_j + B_j.
double score(const ScoreRule& rule, const ProbVector& q, std::size_t occurred);
double score(const ScoreRule& rule, const ProbVector& q, const std::string& occurred);

// Quadratic rule for m-option exams: full confidence in the truth scores 1 and
// the uniform report scores 0.
ScoreRule exam_rule(int m);

double expected_score(const ScoreRule& rule, const ProbVector& q, const ProbVector& p);

// sum_j p_j log(p_j / q_j), natural log, with 0 log 0 = 0.
double log_discrepancy(const ProbVector& p, const ProbVector& q);
// Continuous form by adaptive quadrature of p(x) (log p(x) - log q(x)) over [lower, upper].
double log_discrepancy(const std::function<double(double)>& log_p,
                       const std::function<double(double)>& log_q, double lower, double upper);
// Between two distributions; integrates over the 1e-12 quantile range of p
// (or sums, when both are discrete).
double log_discrepancy(const Distribution& p, const Distribution& q);

double symmetric_discrepancy(const ProbVector& p, const ProbVector& q);

// Discrepancy of Poisson(n theta) as an approximation of Binomial(n, theta),
// evaluated through the expected log-factorial of the failure count.
double binomial_poisson_discrepancy(int n, double theta);

Distribution best_normal_approx(double mean, double variance);
Distribution best_normal_approx(const Distribution& target);

// Information carried by data moving p0 to p1: log_discrepancy(p1, p0).
double info_of_data(const ProbVector& prior, const ProbVector& posterior);
double info_of_data(const Distribution& prior, const Distribution& posterior);

double expected_info_of_experiment(const ProbVector& prior, const ProbVector& marginals,
                                   const std::vector<ProbVector>& posteriors);

}  // namespace bayeskit
