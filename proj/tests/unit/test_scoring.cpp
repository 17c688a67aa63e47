#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "bayeskit/error.hpp"
#include "bayeskit/numeric.hpp"
#include "bayeskit/scoring.hpp"

using namespace bayeskit;

namespace {

// Binomial(n, theta) against Poisson(n theta) by direct summation in log space.
double direct_binomial_poisson(int n, double theta) {
    const double lambda = n * theta;
    double total = 0.0;
    for (int k = 0; k <= n; ++k) {
        const double lb = std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0) + k * std::log(theta) +
                          (n - k) * std::log1p(-theta);
        const double lp = -lambda + k * std::log(lambda) - std::lgamma(k + 1.0);
        total += std::exp(lb) * (lb - lp);
    }
    return total;
}

std::vector<ProbVector> simplex_grid(double step, bool interior) {
    std::vector<ProbVector> out;
    const int steps = static_cast<int>(std::lround(1.0 / step));
    for (int i = 0; i <= steps; ++i) {
        for (int j = 0; i + j <= steps; ++j) {
            const int k = steps - i - j;
            if (interior && (i == 0 || j == 0 || k == 0)) continue;
            out.push_back(ProbVector::normalized(default_labels(3), Eigen::Vector3d(i, j, k)));
        }
    }
    return out;
}

ProbVector random_simplex(std::mt19937_64& rng, int m) {
    std::gamma_distribution<double> g(1.0, 1.0);
    Eigen::VectorXd w(m);
    for (int j = 0; j < m; ++j) w(j) = g(rng) + 1e-6;
    return ProbVector::normalized(default_labels(m), w);
}

}  // namespace

TEST(Scoring, BasicValues) {
    const ScoreRule quad = ScoreRule::quadratic();
    EXPECT_DOUBLE_EQ(score(quad, ProbVector({1.0, 0.0}), 0), 1.0);
    const ScoreRule log = ScoreRule::logarithmic();
    EXPECT_NEAR(expected_score(log, ProbVector({0.5, 0.5}), ProbVector({0.5, 0.5})), -std::log(2.0), 1e-15);
    const ProbVector q({0.2, 0.3, 0.5});
    EXPECT_DOUBLE_EQ(expected_score(quad, q, ProbVector({0.0, 1.0, 0.0})), score(quad, q, 1));
    EXPECT_THROW(score(log, ProbVector({1.0, 0.0}), 1), DomainError);
    EXPECT_THROW(ScoreRule::quadratic(0.0), DomainError);
    EXPECT_THROW(score(quad, q, 3), DomainError);
}

TEST(Scoring, ExamRule) {
    const ScoreRule five = exam_rule(5);
    EXPECT_NEAR(five.A, 1.25, 1e-15);
    EXPECT_NEAR(score(five, ProbVector({0.2, 0.2, 0.2, 0.2, 0.2}), 0), 0.0, 1e-15);
    EXPECT_NEAR(score(five, ProbVector({0.0, 1.0, 0.0, 0.0, 0.0}), 0), -1.5, 1e-15);
    EXPECT_NEAR(score(five, ProbVector({1.0, 0.0, 0.0, 0.0, 0.0}), 0), 1.0, 1e-15);
    EXPECT_NEAR(score(five, ProbVector({0.5, 0.5, 0.0, 0.0, 0.0}), 0), 0.375, 1e-15);
    EXPECT_NEAR(score(exam_rule(2), ProbVector({0.5, 0.5}), 0), 0.0, 1e-15);
    EXPECT_NEAR(score(exam_rule(4), ProbVector({0.0, 0.0, 1.0, 0.0}), 2), 1.0, 1e-15);
    for (int m = 2; m < 10; ++m) {
        Eigen::VectorXd wrong = Eigen::VectorXd::Zero(m);
        wrong(1) = 1.0;
        EXPECT_NEAR(score(exam_rule(m), ProbVector(wrong), 0), -(m + 1.0) / (m - 1.0), 1e-14);
    }
    EXPECT_THROW(exam_rule(1), DomainError);
}

TEST(ScoringProperty, QuadraticFormsAgree) {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0.1, 3.0);
    for (int rep = 0; rep < 50; ++rep) {
        const int m = 2 + rep % 5;
        const ProbVector q = random_simplex(rng, m);
        Eigen::VectorXd B(m);
        for (int j = 0; j < m; ++j) B(j) = u(rng) - 1.5;
        const ScoreRule rule = ScoreRule::quadratic(u(rng), B);
        for (int j = 0; j < m; ++j) {
            Eigen::VectorXd indicator = Eigen::VectorXd::Zero(m);
            indicator(j) = 1.0;
            const double second = rule.A * (1.0 - (q.weights() - indicator).squaredNorm()) + B(j);
            EXPECT_NEAR(score(rule, q, j), second, 1e-13);
        }
    }
}

TEST(ScoringProperty, QuadraticIsProper) {
    const ScoreRule rule = ScoreRule::quadratic(2.0, Eigen::Vector3d(0.1, -0.3, 0.0));
    const auto grid = simplex_grid(0.05, false);
    for (const ProbVector& p : grid) {
        double best = -1e300;
        const ProbVector* arg = nullptr;
        for (const ProbVector& q : grid) {
            const double v = expected_score(rule, q, p);
            if (v > best + 1e-12) {
                best = v;
                arg = &q;
            }
        }
        ASSERT_NE(arg, nullptr);
        EXPECT_NEAR((arg->weights() - p.weights()).norm(), 0.0, 1e-12);
    }
}

TEST(ScoringProperty, LogarithmicIsProperWithClosedFormLoss) {
    const ScoreRule rule = ScoreRule::logarithmic(1.5, Eigen::Vector3d(0.2, 0.0, -1.0));
    const auto grid = simplex_grid(0.05, true);
    for (const ProbVector& p : grid) {
        const double at_p = expected_score(rule, p, p);
        double best = -1e300;
        const ProbVector* arg = nullptr;
        for (const ProbVector& q : grid) {
            const double v = expected_score(rule, q, p);
            EXPECT_NEAR(at_p - v, rule.A * log_discrepancy(p, q), 1e-10);
            if (v > best + 1e-12) {
                best = v;
                arg = &q;
            }
        }
        EXPECT_NEAR((arg->weights() - p.weights()).norm(), 0.0, 1e-12);
    }
}

TEST(Discrepancy, DiscreteValues) {
    EXPECT_NEAR(log_discrepancy(ProbVector({0.5, 0.5}), ProbVector({0.25, 0.75})), 0.14384103622589042, 1e-15);
    const ProbVector p({0.1, 0.6, 0.3});
    EXPECT_DOUBLE_EQ(log_discrepancy(p, p), 0.0);
    EXPECT_NEAR(log_discrepancy(ProbVector({0.0, 1.0}), ProbVector({0.5, 0.5})), std::log(2.0), 1e-15);
    EXPECT_THROW(log_discrepancy(ProbVector({0.5, 0.5}), ProbVector({1.0, 0.0})), DomainError);
    EXPECT_THROW(log_discrepancy(ProbVector({0.5, 0.5}), ProbVector({0.2, 0.3, 0.5})), DomainError);
}

TEST(DiscrepancyProperty, NonnegativeAndZeroOnlyWhenEqual) {
    std::mt19937_64 rng(17);
    for (int rep = 0; rep < 500; ++rep) {
        const int m = 2 + rep % 6;
        const ProbVector p = random_simplex(rng, m), q = random_simplex(rng, m);
        EXPECT_GT(log_discrepancy(p, q), 0.0);
        EXPECT_NEAR(log_discrepancy(p, p), 0.0, 1e-12);
        EXPECT_NEAR(symmetric_discrepancy(p, q), log_discrepancy(p, q) + log_discrepancy(q, p), 1e-14);
        EXPECT_DOUBLE_EQ(symmetric_discrepancy(p, q), symmetric_discrepancy(q, p));
    }
}

TEST(Discrepancy, SymmetricFormIsNotAMetric) {
    const ProbVector a({0.9, 0.1}), b({0.5, 0.5}), c({0.1, 0.9});
    EXPECT_GT(symmetric_discrepancy(a, c), symmetric_discrepancy(a, b) + symmetric_discrepancy(b, c));
}

TEST(Discrepancy, BinomialPoissonMatchesDirectSum) {
    EXPECT_NEAR(binomial_poisson_discrepancy(1, 0.5), 0.1534264097200274, 1e-12);
    for (int n : {1, 5, 50, 500}) {
        for (double theta : {0.001, 0.01, 0.1, 0.5, 0.9}) {
            const double expected = direct_binomial_poisson(n, theta);
            EXPECT_NEAR(binomial_poisson_discrepancy(n, theta), expected, 1e-9 * std::max(1.0, expected)) << n << " " << theta;
        }
    }
    EXPECT_THROW(binomial_poisson_discrepancy(0, 0.5), DomainError);
    EXPECT_THROW(binomial_poisson_discrepancy(3, 1.0), DomainError);
}

TEST(Discrepancy, BinomialPoissonShape) {
    EXPECT_LT(binomial_poisson_discrepancy(50, 0.1), binomial_poisson_discrepancy(5, 0.1));
    double previous = 0.0;
    for (double theta : {1e-2, 1e-3, 1e-4, 1e-5, 1e-6}) {
        const double d = binomial_poisson_discrepancy(20, theta);
        if (previous > 0.0) EXPECT_LT(d, previous);
        previous = d;
    }
    EXPECT_LT(previous, 1e-10);
    for (double theta : {0.01, 0.1, 0.3, 0.5}) {
        double last = 1e300;
        for (int n : {1, 2, 5, 20, 50, 200, 500}) {
            const double d = binomial_poisson_discrepancy(n, theta);
            EXPECT_LT(d, last) << n << " " << theta;
            last = d;
        }
    }
    for (int n : {1, 5, 50, 500}) {
        double last = 0.0;
        for (double theta : {0.01, 0.05, 0.1, 0.3, 0.5}) {
            const double d = binomial_poisson_discrepancy(n, theta);
            EXPECT_GT(d, last) << n << " " << theta;
            last = d;
        }
    }
}

TEST(Discrepancy, BestNormalForGamma) {
    const double expected[] = {0.1882964585831125, 0.04298828866844576, 0.010498377873835271};
    int i = 0;
    double last = 1e300;
    for (double shape : {2.0, 8.0, 32.0}) {
        const Distribution g = Distribution::gamma(shape, 2.0);
        const Distribution n = best_normal_approx(g);
        EXPECT_NEAR(n.param(0), shape / 2.0, 1e-14);
        EXPECT_NEAR(n.param(1), 4.0 / shape, 1e-14);
        const double d = log_discrepancy(g, n);
        EXPECT_NEAR(d, expected[i++], 1e-8);
        EXPECT_LT(d, last);
        last = d;
    }
}

TEST(Discrepancy, BestNormalIsGridArgmin) {
    const Distribution target = Distribution::gamma(4.0, 2.0);
    const Distribution best = best_normal_approx(target);
    EXPECT_EQ(best, Distribution::normal_precision(2.0, 1.0));
    const double at_best = log_discrepancy(target, best);
    for (double mu : {1.8, 1.9, 2.0, 2.1, 2.2}) {
        for (double lambda : {0.8, 0.9, 1.0, 1.1, 1.25}) {
            if (mu == 2.0 && lambda == 1.0) continue;
            EXPECT_GT(log_discrepancy(target, Distribution::normal_precision(mu, lambda)), at_best);
        }
    }
}

TEST(Discrepancy, NormalTargetsAndMixtures) {
    const Distribution normal = Distribution::normal_precision(-1.5, 3.0);
    EXPECT_EQ(best_normal_approx(normal), normal);
    EXPECT_NEAR(log_discrepancy(normal, best_normal_approx(normal)), 0.0, 1e-10);

    const auto phi = [](double x, double m) { return std::exp(-0.5 * (x - m) * (x - m)) / std::sqrt(2.0 * M_PI); };
    const auto log_mix = [&](double x) { return std::log(0.5 * phi(x, -1.0) + 0.5 * phi(x, 1.0)); };
    const Distribution approx = best_normal_approx(0.0, 2.0);
    EXPECT_EQ(approx, Distribution::normal_precision(0.0, 0.5));
    const auto discrepancy_to = [&](double mu, double lambda) {
        const Distribution q = Distribution::normal_precision(mu, lambda);
        return log_discrepancy(log_mix, [&](double x) { return log_density(q, x); }, -15.0, 15.0);
    };
    const double at_best = discrepancy_to(0.0, 0.5);
    for (double mu : {-0.2, 0.0, 0.2}) {
        for (double lambda : {0.4, 0.5, 0.6}) {
            if (mu == 0.0 && lambda == 0.5) continue;
            EXPECT_GT(discrepancy_to(mu, lambda), at_best);
        }
    }
}

TEST(Information, CoinLimits) {
    const ProbVector prior({0.375, 0.625});
    EXPECT_NEAR(info_of_data(prior, ProbVector({0.25, 0.75})), 0.03537489, 1e-6);
    EXPECT_NEAR(info_of_data(prior, ProbVector({0.5, 0.5})), 0.03226926, 1e-6);
    EXPECT_DOUBLE_EQ(info_of_data(prior, prior), 0.0);
    EXPECT_THROW(info_of_data(ProbVector({0.0, 1.0}), prior), DomainError);
}

TEST(Information, CoinExperiment) {
    const ProbVector prior({0.5, 0.5});
    const ProbVector heads({0.6, 0.4}), tails({1.0 / 3.0, 2.0 / 3.0});
    const double expected = 0.625 * (0.6 * std::log(1.2) + 0.4 * std::log(0.8)) +
                            0.375 * (std::log(2.0 / 3.0) / 3.0 + 2.0 / 3.0 * std::log(4.0 / 3.0));
    EXPECT_NEAR(expected_info_of_experiment(prior, ProbVector({0.375, 0.625}), {tails, heads}), expected, 1e-15);
    EXPECT_DOUBLE_EQ(expected_info_of_experiment(prior, ProbVector({0.3, 0.7}), {prior, prior}), 0.0);
}

TEST(InformationProperty, RefinementIsMoreInformative) {
    std::mt19937_64 rng(23);
    for (int rep = 0; rep < 200; ++rep) {
        const int m = 2 + rep % 4;
        std::vector<ProbVector> fine;
        for (int i = 0; i < 4; ++i) fine.push_back(random_simplex(rng, m));
        const ProbVector w = random_simplex(rng, 4);
        Eigen::VectorXd prior = Eigen::VectorXd::Zero(m);
        for (int i = 0; i < 4; ++i) prior += w[i] * fine[i].weights();
        std::vector<ProbVector> coarse;
        for (int g = 0; g < 2; ++g) {
            const double mass = w[2 * g] + w[2 * g + 1];
            coarse.push_back(ProbVector::normalized(
                default_labels(m), (w[2 * g] * fine[2 * g].weights() + w[2 * g + 1] * fine[2 * g + 1].weights()) / mass));
        }
        const ProbVector p0 = ProbVector::normalized(default_labels(m), prior);
        const ProbVector coarse_w = ProbVector::normalized(default_labels(2), Eigen::Vector2d(w[0] + w[1], w[2] + w[3]));
        EXPECT_GE(expected_info_of_experiment(p0, w, fine) + 1e-12, expected_info_of_experiment(p0, coarse_w, coarse));
    }
}

TEST(InformationProperty, DataInformationIsNonnegative) {
    std::mt19937_64 rng(29);
    for (int rep = 0; rep < 200; ++rep) {
        const ProbVector a = random_simplex(rng, 4), b = random_simplex(rng, 4);
        EXPECT_GT(info_of_data(a, b), 0.0);
        EXPECT_NEAR(info_of_data(a, b), log_discrepancy(b, a), 1e-15);
    }
}
