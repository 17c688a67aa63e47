#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "bayeskit/distribution.hpp"
#include "bayeskit/error.hpp"
#include "bayeskit/numeric.hpp"

using namespace bayeskit;

TEST(Distribution, FamilyNamesRoundTrip) {
    for (Family f : {Family::Beta, Family::Gamma, Family::NormalPrecision, Family::Pareto, Family::Poisson,
                     Family::Binomial, Family::Bernoulli, Family::Geometric, Family::ContinuousUniform,
                     Family::PoissonGamma, Family::NormalGamma}) {
        EXPECT_EQ(parse_family(family_name(f)), f);
    }
    EXPECT_EQ(parse_family("normal"), Family::NormalPrecision);
    EXPECT_EQ(parse_family("GAMMA"), Family::Gamma);
    EXPECT_FALSE(parse_family("weibull").has_value());
}

TEST(Distribution, RejectsInvalidParameters) {
    EXPECT_THROW(Distribution::beta(0.0, 1.0), DomainError);
    EXPECT_THROW(Distribution::gamma(1.0, -2.0), DomainError);
    EXPECT_THROW(Distribution::binomial(3, 1.5), DomainError);
    EXPECT_THROW(Distribution::normal_precision(0.0, 0.0), DomainError);
    const std::vector<double> three{1, 2, 3};
    EXPECT_THROW(Distribution::make(Family::Beta, three), DomainError);
}

TEST(Distribution, DescribeUsesShortestSignificantForm) {
    EXPECT_EQ(describe(Distribution::gamma(1391.108, 2.01012)), "Gamma(1391.108, 2.01012)");
    EXPECT_EQ(describe(Distribution::beta(0.5, 0.5)), "Beta(0.5, 0.5)");
}

TEST(Distribution, QuantilesMatchReference) {
    EXPECT_NEAR(quantile(Distribution::gamma(1, 1), 0.95), 2.9957322735539895, 1e-11);
    EXPECT_NEAR(quantile(Distribution::gamma(0.3, 2), 0.01), 7.511113276180204e-08, 1e-17);
    EXPECT_NEAR(quantile(Distribution::beta(0.2, 3), 0.3), 0.0006069821751580952, 1e-13);
}

TEST(Distribution, DiscreteCdfsMatchReference) {
    EXPECT_NEAR(cdf(Distribution::poisson(3.7), 5), 0.830088295075957, 1e-13);
    EXPECT_NEAR(cdf(Distribution::binomial(20, 0.3), 7), 0.7722717974181608, 1e-13);
    EXPECT_NEAR(cdf(Distribution::geometric(0.3), 4), 0.83193, 1e-13);
    EXPECT_NEAR(cdf(Distribution::poisson_gamma(1391.108, 2.01012, 1), 700), 0.6071994933041199, 1e-9);
    EXPECT_NEAR(density(Distribution::poisson_gamma(1391.108, 2.01012, 1), 692), 0.012391390289704006, 1e-12);
}

TEST(Distribution, PoissonGammaMatchesNegativeBinomial) {
    // Pg(alpha, beta, n) is negative binomial with r = alpha and p = beta / (beta + n).
    const Distribution pg = Distribution::poisson_gamma(5, 1.5, 1);
    EXPECT_NEAR(density(pg, 3), 0.17418239999999996, 1e-13);
}

TEST(Distribution, MomentsFollowClosedForms) {
    EXPECT_NEAR(mean(Distribution::gamma(3, 2)), 1.5, 1e-15);
    EXPECT_NEAR(variance(Distribution::beta(2, 3)), 6.0 / (25.0 * 6.0), 1e-15);
    EXPECT_NEAR(mean(Distribution::pareto(3, 2)), 3.0, 1e-15);
    EXPECT_THROW(variance(Distribution::pareto(2, 1)), MomentError);
    EXPECT_NEAR(mean(Distribution::geometric(0.25)), 3.0, 1e-15);
    EXPECT_NEAR(mean(Distribution::poisson_gamma(1391.108, 2.01012, 1)), 1391.108 / 2.01012, 1e-10);
}

TEST(Distribution, ContinuousDensitiesIntegrateToOne) {
    for (const Distribution& d : {Distribution::beta(0.7, 2.5), Distribution::gamma(4, 0.3),
                                  Distribution::normal_precision(-1, 4), Distribution::pareto(2.5, 1.2),
                                  Distribution::continuous_uniform(3)}) {
        const Support s = support(d);
        const double lo = std::isfinite(s.lower) ? s.lower : quantile(d, 1e-14);
        const double hi = std::isfinite(s.upper) ? s.upper : quantile(d, 1 - 1e-14);
        const auto q = numeric::integrate([&](double x) { return density(d, x); }, lo, hi, 1e-11, 1e-11, 5000);
        EXPECT_NEAR(q.value, 1.0, 1e-7) << describe(d);
    }
}

TEST(Distribution, DiscreteMassSumsToOne) {
    for (const Distribution& d : {Distribution::poisson(4.2), Distribution::binomial(12, 0.35),
                                  Distribution::geometric(0.2), Distribution::poisson_gamma(3, 0.5, 2)}) {
        double total = 0.0;
        for (int k = 0; k < 5000; ++k) total += density(d, k);
        EXPECT_NEAR(total, 1.0, 1e-10) << describe(d);
    }
}

TEST(Distribution, QuantileInvertsCdf) {
    for (const Distribution& d : {Distribution::beta(3, 7), Distribution::gamma(0.6, 3),
                                  Distribution::normal_precision(2, 0.25), Distribution::pareto(4, 2)}) {
        for (double p = 0.01; p < 1.0; p += 0.07) EXPECT_NEAR(cdf(d, quantile(d, p)), p, 1e-10) << describe(d);
    }
    for (const Distribution& d : {Distribution::poisson(9.5), Distribution::binomial(30, 0.4),
                                  Distribution::geometric(0.1)}) {
        for (double p = 0.03; p < 1.0; p += 0.09) {
            const double k = quantile(d, p);
            EXPECT_GE(cdf(d, k), p);
            if (k > 0) EXPECT_LT(cdf(d, k - 1), p);
        }
    }
}

TEST(Distribution, LogDensityOutsideSupportIsMinusInfinity) {
    EXPECT_EQ(log_density(Distribution::beta(2, 2), 1.5), -std::numeric_limits<double>::infinity());
    EXPECT_EQ(density(Distribution::poisson(2), 1.5), 0.0);
    EXPECT_EQ(density(Distribution::pareto(3, 2), 1.0), 0.0);
}

TEST(Distribution, SamplingIsSeededAndMatchesMoments) {
    const Distribution g = Distribution::gamma(0.4, 2.0);
    const auto a = sample(g, 50000, 42);
    EXPECT_EQ(a, sample(g, 50000, 42));
    EXPECT_NE(a, sample(g, 50000, 43));
    const double m = std::accumulate(a.begin(), a.end(), 0.0) / a.size();
    EXPECT_NEAR(m, 0.2, 0.01);
    const auto b = sample(Distribution::beta(2, 5), 50000, 1);
    EXPECT_NEAR(std::accumulate(b.begin(), b.end(), 0.0) / b.size(), 2.0 / 7.0, 0.005);
    const auto p = sample(Distribution::poisson(6), 20000, 3);
    EXPECT_NEAR(std::accumulate(p.begin(), p.end(), 0.0) / p.size(), 6.0, 0.08);
}

TEST(Distribution, NormalGammaMarginals) {
    const Distribution ng = Distribution::normal_gamma(1, 2, 3, 4);
    EXPECT_EQ(precision_marginal(ng), Distribution::gamma(3, 4));
    const double joint = normal_gamma_density(ng, 0.5, 0.7);
    const double expected = density(Distribution::normal_precision(1, 1.4), 0.5) * density(Distribution::gamma(3, 4), 0.7);
    EXPECT_NEAR(joint, expected, 1e-14);
}
