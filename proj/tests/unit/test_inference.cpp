#include <gtest/gtest.h>

#include <random>

#include "bayeskit/error.hpp"
#include "bayeskit/inference.hpp"
#include "bayeskit/numeric.hpp"

using namespace bayeskit;

namespace {

const double kInf = std::numeric_limits<double>::infinity();

Distribution caseta_posterior() { return Distribution::gamma(1391.108, 2.01012); }
Distribution caseta_predictive() { return Distribution::poisson_gamma(1391.108, 2.01012, 1); }

HypothesisPartition caseta_hypotheses() {
    return {{{"H1", {{0, 690}}}, {"H2", {{691, 750}}}, {"H3", {{751, kInf}}}}};
}

Eigen::MatrixXd caseta_costs() {
    Eigen::MatrixXd u(3, 3);
    u << -1500, -5000, -8500, -3000, -3000, -6500, -4500, -4500, -4500;
    return u;
}

double interval_length(const std::vector<Interval>& region) {
    double total = 0.0;
    for (const Interval& r : region) total += r.upper - r.lower;
    return total;
}

}  // namespace

TEST(Inference, PointEstimates) {
    EXPECT_NEAR(point_estimate(caseta_posterior(), EstimationUtility::Quadratic), 692.05, 0.01);
    EXPECT_NEAR(point_estimate(Distribution::beta(2, 2), EstimationUtility::Absolute), 0.5, 1e-12);
    for (double a : {0.5, 3.0, 40.0}) {
        EXPECT_NEAR(point_estimate(Distribution::gamma(a, 2.5), EstimationUtility::RelativeQuadratic), (a + 1.0) / 2.5,
                    1e-12 * a);
    }
    EXPECT_NEAR(point_estimate(Distribution::gamma(3, 1), EstimationUtility::Absolute), quantile(Distribution::gamma(3, 1), 0.5),
                1e-14);
    EXPECT_THROW(point_estimate(Distribution::normal_precision(-1.0, 1.0), EstimationUtility::RelativeQuadratic), DomainError);
}

TEST(Inference, RelativeQuadraticMaximizesExpectedUtility) {
    const Distribution g = Distribution::gamma(3.0, 2.0);
    const auto expected_utility = [&](double t) {
        return -numeric::integrate([&](double x) { return density(g, x) * (t - x) * (t - x); }, 0.0, 40.0).value / (t * t);
    };
    double best_t = 0.0, best = -1e300;
    for (double t = 1.0; t <= 3.0; t += 1e-3) {
        const double v = expected_utility(t);
        if (v > best) {
            best = v;
            best_t = t;
        }
    }
    EXPECT_NEAR(best_t, point_estimate(g, EstimationUtility::RelativeQuadratic), 1e-3);
}

TEST(InferenceProperty, QuadraticEstimateMinimizesSquaredError) {
    for (const Distribution& d : {caseta_posterior(), Distribution::beta(2, 7), Distribution::normal_precision(-3, 0.2)}) {
        const double est = point_estimate(d, EstimationUtility::Quadratic);
        const double var = variance(d);
        const auto risk = [&](double t) { return (t - mean(d)) * (t - mean(d)) + var; };
        const double sd = std::sqrt(var);
        for (int i = -20; i <= 20; ++i) {
            if (i == 0) continue;
            EXPECT_GT(risk(est + 0.05 * i * sd), risk(est));
        }
    }
}

TEST(Inference, CasetaHypothesisProbabilities) {
    const ProbVector p = hypothesis_probabilities(caseta_predictive(), caseta_hypotheses());
    ASSERT_EQ(p.size(), 3u);
    EXPECT_NEAR(p[0], 0.4849, 5e-4);
    EXPECT_NEAR(p[1], 0.4786, 5e-4);
    EXPECT_NEAR(p[2], 0.0365, 5e-4);
    EXPECT_NEAR(p[0], 0.4848800501905494, 1e-8);
    EXPECT_NEAR(p[1], 0.478631400844073, 1e-8);
    EXPECT_NEAR(p[2], 0.03648854896537756, 1e-8);
}

TEST(Inference, AuditPosteriorTail) {
    const HypothesisPartition above{{{"above", {{0.10, 1.0}}}}};
    const ProbVector p = hypothesis_probabilities(Distribution::beta(210.090, 2085.354), above);
    ASSERT_EQ(p.size(), 2u);
    EXPECT_EQ(p.labels()[1], kResidualLabel);
    EXPECT_NEAR(p[0], 0.0821740840341784, 1e-9);
}

TEST(Inference, SingleCoveringRegion) {
    const HypothesisPartition all{{{"all", {{-kInf, kInf}}}}};
    const ProbVector p = hypothesis_probabilities(Distribution::normal_precision(0, 1), all);
    ASSERT_EQ(p.size(), 1u);
    EXPECT_DOUBLE_EQ(p[0], 1.0);
}

TEST(Inference, CompletedPartition) {
    const HypothesisPartition part{{{"low", {{0, 3}}}, {"high", {{8, 10}}}}};
    const HypothesisPartition full = completed(part, Distribution::poisson(4));
    ASSERT_EQ(full.hypotheses.size(), 3u);
    const Hypothesis& rest = full.hypotheses[2];
    EXPECT_EQ(rest.label, kResidualLabel);
    ASSERT_EQ(rest.regions.size(), 2u);
    EXPECT_DOUBLE_EQ(rest.regions[0].lower, 4);
    EXPECT_DOUBLE_EQ(rest.regions[0].upper, 7);
    EXPECT_DOUBLE_EQ(rest.regions[1].lower, 11);
    EXPECT_EQ(rest.regions[1].upper, kInf);

    const HypothesisPartition overlapping{{{"a", {{0, 3}}}, {"b", {{3, 5}}}}};
    EXPECT_THROW(completed(overlapping, Distribution::poisson(4)), DomainError);
    EXPECT_NO_THROW(completed(overlapping, Distribution::gamma(2, 1)));
    const HypothesisPartition reserved{{{kResidualLabel, {{0, 1}}}}};
    EXPECT_THROW(completed(reserved, Distribution::gamma(2, 1)), DomainError);
}

TEST(InferenceProperty, PartitionWithResidualSumsToOne) {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> u(0.0, 20.0);
    for (int rep = 0; rep < 100; ++rep) {
        double a = u(rng), b = u(rng), c = u(rng);
        std::vector<double> cuts{a, b, c};
        std::sort(cuts.begin(), cuts.end());
        const HypothesisPartition part{{{"x", {{cuts[0], cuts[1]}}}, {"y", {{cuts[2], cuts[2] + 3.0}}}}};
        const Distribution d = rep % 2 ? Distribution::gamma(1.0 + u(rng), 1.0) : Distribution::poisson(1.0 + u(rng));
        if (d.is_discrete()) {
            const HypothesisPartition whole{{{"x", {{std::floor(cuts[0]), std::floor(cuts[1])}}},
                                             {"y", {{std::floor(cuts[2]) + 1, std::floor(cuts[2]) + 4}}}}};
            EXPECT_NEAR(hypothesis_probabilities(d, whole).weights().sum(), 1.0, 1e-6);
        } else {
            EXPECT_NEAR(hypothesis_probabilities(d, part).weights().sum(), 1.0, 1e-6);
        }
    }
}

TEST(Inference, CasetaContrast) {
    const ContrastReport with = contrast(caseta_predictive(), caseta_hypotheses(), caseta_costs());
    EXPECT_EQ(with.chosen, std::vector<std::string>{"a2"});
    EXPECT_NEAR(with.expected_utilities(0), -3430.60, 0.5);
    EXPECT_NEAR(with.expected_utilities(1), -3127.75, 0.5);
    EXPECT_NEAR(with.expected_utilities(2), -4500.00, 1e-9);

    const ContrastReport plain = contrast(caseta_predictive(), caseta_hypotheses());
    EXPECT_EQ(plain.chosen, std::vector<std::string>{"H1"});
    for (std::size_t i = 0; i < 3; ++i) EXPECT_DOUBLE_EQ(plain.expected_utilities(static_cast<Eigen::Index>(i)), plain.probabilities[i]);

    EXPECT_THROW(contrast(caseta_predictive(), caseta_hypotheses(), Eigen::MatrixXd::Zero(2, 2)), DomainError);
}

TEST(Inference, ConcentratedLawPicksItsHypothesis) {
    const Distribution tight = Distribution::normal_precision(5.0, 1e8);
    const HypothesisPartition part{{{"below", {{-kInf, 4}}}, {"middle", {{4, 6}}}, {"above", {{6, kInf}}}}};
    Eigen::MatrixXd u = Eigen::MatrixXd::Identity(3, 3) * 7.0;
    EXPECT_EQ(contrast(tight, part, u, {"b", "m", "a"}).chosen, std::vector<std::string>{"m"});
}

TEST(Inference, CasetaHpd) {
    const auto region = hpd_region(caseta_posterior(), 0.95);
    ASSERT_EQ(region.size(), 1u);
    EXPECT_NEAR(region[0].lower, 655.88, 0.5);
    EXPECT_NEAR(region[0].upper, 728.6, 0.5);
    EXPECT_NEAR(region[0].lower, 655.8329902520036, 1e-4);
    EXPECT_NEAR(region[0].upper, 728.5506254229587, 1e-4);
    const Distribution d = caseta_posterior();
    EXPECT_NEAR(cdf(d, region[0].upper) - cdf(d, region[0].lower), 0.95, 1e-4);
    EXPECT_NEAR(density(d, region[0].lower) / density(d, region[0].upper), 1.0, 1e-4);
}

TEST(Inference, HpdBoundaryCases) {
    const auto mono = hpd_region(Distribution::gamma(1, 1), 0.95);
    ASSERT_EQ(mono.size(), 1u);
    EXPECT_NEAR(mono[0].lower, 0.0, 1e-9);
    EXPECT_NEAR(mono[0].upper, 2.995732273553991, 1e-6);

    const Distribution n = Distribution::normal_precision(3.0, 0.25);
    const auto sym = hpd_region(n, 0.8);
    const Interval et = equal_tailed_interval(n, 0.8);
    EXPECT_NEAR(sym[0].lower, et.lower, 1e-6);
    EXPECT_NEAR(sym[0].upper, et.upper, 1e-6);

    EXPECT_THROW(hpd_region(Distribution::poisson(3), 0.9), DomainError);
    EXPECT_THROW(hpd_region(n, 1.0), DomainError);
}

TEST(InferenceProperty, HpdIsNoLongerThanEqualTailed) {
    std::mt19937_64 rng(37);
    std::uniform_real_distribution<double> shape(1.2, 30.0), level(0.5, 0.99);
    for (int rep = 0; rep < 20; ++rep) {
        const double a = shape(rng), b = shape(rng);
        const Distribution d = rep % 2 ? Distribution::gamma(a, b) : Distribution::beta(a, b);
        const double mass = level(rng);
        const auto region = hpd_region(d, mass);
        ASSERT_EQ(region.size(), 1u) << describe(d);
        const Interval et = equal_tailed_interval(d, mass);
        EXPECT_LE(interval_length(region), et.upper - et.lower + 1e-9) << describe(d);
        EXPECT_NEAR(cdf(d, region[0].upper) - cdf(d, region[0].lower), mass, 1e-4) << describe(d);
        EXPECT_NEAR(density(d, region[0].lower) / density(d, region[0].upper), 1.0, 1e-4) << describe(d);
    }
}
