#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "bayeskit/conjugate.hpp"
#include "bayeskit/error.hpp"
#include "bayeskit/numeric.hpp"

using namespace bayeskit;

namespace {

struct Pair {
    Likelihood likelihood;
    Distribution prior;
    double known;
};

std::vector<Pair> all_pairs() {
    const double nan = std::nan("");
    return {
        {Likelihood::Bernoulli, Distribution::beta(2, 3), nan},
        {Likelihood::Poisson, Distribution::gamma(3, 0.5), nan},
        {Likelihood::Geometric, Distribution::beta(3, 2), nan},
        {Likelihood::Exponential, Distribution::gamma(2, 1), nan},
        {Likelihood::ContinuousUniform, Distribution::pareto(2, 1.5), nan},
        {Likelihood::NormalKnownPrecision, Distribution::normal_precision(0.5, 2), 1.5},
        {Likelihood::NormalKnownMean, Distribution::gamma(3, 2), 0.25},
        {Likelihood::NormalBoth, Distribution::normal_gamma(1, 2, 3, 4), nan},
    };
}

std::vector<double> draw_data(Likelihood l, std::mt19937_64& rng, int n) {
    std::vector<double> xs;
    for (int i = 0; i < n; ++i) {
        switch (l) {
            case Likelihood::Bernoulli: xs.push_back(std::bernoulli_distribution(0.4)(rng)); break;
            case Likelihood::Poisson: xs.push_back(std::poisson_distribution<int>(3.5)(rng)); break;
            case Likelihood::Geometric: xs.push_back(std::geometric_distribution<int>(0.3)(rng)); break;
            case Likelihood::Exponential: xs.push_back(std::exponential_distribution<double>(2.0)(rng)); break;
            case Likelihood::ContinuousUniform: xs.push_back(std::uniform_real_distribution<double>(0, 2.7)(rng)); break;
            default: xs.push_back(std::normal_distribution<double>(0.3, 1.1)(rng)); break;
        }
    }
    return xs;
}

void expect_same(const Distribution& a, const Distribution& b) {
    ASSERT_EQ(a.family(), b.family());
    for (std::size_t i = 0; i < a.params().size(); ++i) {
        EXPECT_NEAR(a.param(i), b.param(i), 1e-10 * std::max(1.0, std::abs(b.param(i)))) << describe(a) << " vs " << describe(b);
    }
}

}  // namespace

TEST(Conjugate, ReferencePosteriors) {
    const ConjugateModel audit(Likelihood::Bernoulli, Distribution::beta(193.090, 1952.354));
    EXPECT_EQ(posterior(audit, SampleSummary::binary(150, 17)), Distribution::beta(210.090, 1952.354 + 133));
    const ConjugateModel caseta(Likelihood::Poisson, Distribution::gamma(9.108, 0.01012));
    const std::vector<double> xs{679, 703};
    const Distribution post = posterior(caseta, SampleSummary::from_data(xs));
    EXPECT_NEAR(post.param(0), 1391.108, 1e-12);
    EXPECT_NEAR(post.param(1), 2.01012, 1e-14);
    EXPECT_EQ(describe(post), "Gamma(1391.108, 2.01012)");
}

TEST(Conjugate, NoDataIsIdentity) {
    for (const Pair& p : all_pairs()) {
        const ConjugateModel m(p.likelihood, p.prior, p.known);
        expect_same(posterior(m, SampleSummary{}), p.prior);
    }
}

TEST(Conjugate, UpdateRulesByHand) {
    const std::vector<double> xs{1, 0, 3, 2};
    auto s = SampleSummary::from_data(xs);
    EXPECT_EQ(posterior(ConjugateModel(Likelihood::Geometric, Distribution::beta(2, 3)), s), Distribution::beta(6, 9));
    EXPECT_EQ(posterior(ConjugateModel(Likelihood::Exponential, Distribution::gamma(2, 3)), s), Distribution::gamma(6, 9));
    EXPECT_EQ(posterior(ConjugateModel(Likelihood::ContinuousUniform, Distribution::pareto(2, 2.5)), s),
              Distribution::pareto(6, 3));
    const Distribution nk = posterior(ConjugateModel(Likelihood::NormalKnownPrecision, Distribution::normal_precision(0, 2), 0.5), s);
    EXPECT_NEAR(nk.param(1), 4.0, 1e-14);
    EXPECT_NEAR(nk.param(0), (0.5 * 6.0) / 4.0, 1e-14);
    const Distribution nm = posterior(ConjugateModel(Likelihood::NormalKnownMean, Distribution::gamma(1, 1), 1.0), s);
    EXPECT_NEAR(nm.param(0), 3.0, 1e-14);
    EXPECT_NEAR(nm.param(1), 1.0 + 0.5 * (0 + 1 + 4 + 1), 1e-14);
    const Distribution ng = posterior(ConjugateModel(Likelihood::NormalBoth, Distribution::normal_gamma(1, 2, 3, 4)), s);
    // xbar = 1.5, sum of squared deviations = 5, n0 n (xbar - mu0)^2 / (2 (n0 + n)) = 2*4*0.25/12.
    EXPECT_NEAR(ng.param(0), (2 * 1 + 6.0) / 6.0, 1e-14);
    EXPECT_NEAR(ng.param(1), 6.0, 1e-14);
    EXPECT_NEAR(ng.param(2), 5.0, 1e-14);
    EXPECT_NEAR(ng.param(3), 4 + 2.5 + 2.0 / 12.0, 1e-13);
}

TEST(Conjugate, RejectsMismatchedPriorsAndData) {
    EXPECT_THROW(ConjugateModel(Likelihood::Poisson, Distribution::beta(1, 1)), DomainError);
    EXPECT_THROW(ConjugateModel(Likelihood::NormalKnownMean, Distribution::gamma(1, 1)), DomainError);
    const std::vector<double> bad{0, 1, 2};
    EXPECT_THROW(validate_data(Likelihood::Bernoulli, bad), DomainError);
    const std::vector<double> negative{-1};
    EXPECT_THROW(validate_data(Likelihood::Poisson, negative), DomainError);
    EXPECT_THROW(SampleSummary::binary(3, 4), DomainError);
}

TEST(ConjugateProperty, ClosureAndSequentialEqualsBatch) {
    std::mt19937_64 rng(2024);
    for (const Pair& p : all_pairs()) {
        const ConjugateModel m(p.likelihood, p.prior, p.known);
        for (int rep = 0; rep < 10; ++rep) {
            const auto d1 = draw_data(p.likelihood, rng, 1 + rep);
            const auto d2 = draw_data(p.likelihood, rng, 3 + 2 * rep);
            const auto s1 = SampleSummary::from_data(d1);
            const auto s2 = SampleSummary::from_data(d2);
            const Distribution once = posterior(m, s1.merged(s2));
            EXPECT_EQ(once.family(), p.prior.family());
            const Distribution twice = posterior(m.with_prior(posterior(m, s1)), s2);
            expect_same(twice, once);
        }
    }
}

TEST(ConjugateProperty, PosteriorProportionalToPriorTimesLikelihood) {
    std::mt19937_64 rng(99);
    for (const Pair& p : all_pairs()) {
        if (p.likelihood == Likelihood::NormalBoth) continue;  // bivariate parameter
        const ConjugateModel m(p.likelihood, p.prior, p.known);
        const auto xs = draw_data(p.likelihood, rng, 4);
        const Distribution post = posterior(m, SampleSummary::from_data(xs));
        auto unnorm = [&](double t) {
            double lp = log_density(p.prior, t);
            for (double x : xs) lp += m.log_likelihood(x, t);
            return std::exp(lp);
        };
        const double lo = quantile(post, 1e-9), hi = quantile(post, 1 - 1e-9);
        const double z = numeric::integrate(unnorm, lo, hi, 1e-14, 1e-12, 5000).value;
        for (double u : {0.1, 0.3, 0.5, 0.7, 0.9}) {
            const double t = quantile(post, u);
            EXPECT_NEAR(unnorm(t) / z, density(post, t), 1e-6 * std::max(1.0, density(post, t)))
                << likelihood_name(p.likelihood);
        }
    }
}

TEST(Conjugate, ClosedFormPredictives) {
    const ConjugateModel bern(Likelihood::Bernoulli, Distribution::beta(193.090, 1952.354));
    const Predictive pp = posterior_predictive(bern, SampleSummary::binary(150, 17));
    ASSERT_TRUE(pp.has_closed_form());
    EXPECT_NEAR(pp.density(1), 210.090 / 2295.444, 1e-14);
    const ConjugateModel flat(Likelihood::Bernoulli, Distribution::beta(1, 1));
    EXPECT_NEAR(prior_predictive(flat).density(1), 0.5, 1e-15);

    const ConjugateModel caseta(Likelihood::Poisson, Distribution::gamma(9.108, 0.01012));
    const std::vector<double> xs{679, 703};
    EXPECT_EQ(posterior_predictive(caseta, SampleSummary::from_data(xs)).distribution(),
              Distribution::poisson_gamma(1391.108, 2.01012, 1));
    EXPECT_EQ(prior_predictive(caseta).distribution(), Distribution::poisson_gamma(9.108, 0.01012, 1));
}

TEST(Conjugate, NumericPredictivesMatchReference) {
    const double nan = std::nan("");
    // Exponential with Gamma(3, 2): Lomax density.
    EXPECT_NEAR(prior_predictive(ConjugateModel(Likelihood::Exponential, Distribution::gamma(3, 2))).density(1.5),
                0.15993336109954187, 1e-7);
    // Geometric with Beta(2, 4): B(3, 6) / B(2, 4).
    EXPECT_NEAR(prior_predictive(ConjugateModel(Likelihood::Geometric, Distribution::beta(2, 4))).density(2),
                0.11904761904761905, 1e-7);
    // Normal with unknown mean and precision: Student t.
    EXPECT_NEAR(prior_predictive(ConjugateModel(Likelihood::NormalBoth, Distribution::normal_gamma(1, 2, 3, 4))).density(0.3),
                0.23525912652713357, 1e-7);
    // Known precision 2, prior precision 0.5: N(1, 1/2 + 1/0.5).
    EXPECT_NEAR(prior_predictive(ConjugateModel(Likelihood::NormalKnownPrecision, Distribution::normal_precision(1, 0.5), 2)).density(0.3),
                0.22875953351154438, 1e-7);
    // Known mean 0.5, Gamma(3, 2) on the precision: t with 6 degrees of freedom.
    EXPECT_NEAR(prior_predictive(ConjugateModel(Likelihood::NormalKnownMean, Distribution::gamma(3, 2), 0.5)).density(1.2),
                0.31281607094872055, 1e-7);
    // Uniform with Pareto(3, 2): alpha beta^alpha / ((alpha + 1) max(x, beta)^(alpha + 1)).
    const Predictive up = prior_predictive(ConjugateModel(Likelihood::ContinuousUniform, Distribution::pareto(3, 2), nan));
    EXPECT_NEAR(up.density(1.0), 0.375, 1e-7);
    EXPECT_NEAR(up.density(4.0), 0.0234375, 1e-7);
}

TEST(ConjugateProperty, PredictivesNormalize) {
    for (const Pair& p : all_pairs()) {
        const ConjugateModel m(p.likelihood, p.prior, p.known);
        const Predictive pred = prior_predictive(m);
        double total = 0.0;
        if (pred.is_discrete()) {
            for (int k = 0; k < 20000; ++k) total += pred.density(k);
        } else {
            const Support s = pred.support();
            std::vector<double> pts;
            if (std::isfinite(s.lower)) pts.push_back(s.lower);
            for (double x = -60.0; x <= 60.0; x += 0.5) {
                if (x > s.lower && x < s.upper) pts.push_back(x);
            }
            pts.push_back(std::isfinite(s.upper) ? s.upper : 5000.0);
            total = numeric::integrate([&](double x) { return pred.density(x); }, pts, 1e-9, 1e-9).value;
        }
        EXPECT_NEAR(total, 1.0, 1e-6) << likelihood_name(p.likelihood);
    }
}

TEST(Grid, CoinPosteriors) {
    const GridPrior prior(std::vector<double>{0.75, 0.5}, std::vector<double>{0.5, 0.5});
    const GridLikelihood coin{GridFamily::Bernoulli};
    const std::vector<double> one{1}, two{1, 0};
    const std::vector<double> twenty{0, 1, 1, 1, 0, 1, 0, 1, 0, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1};
    EXPECT_NEAR(grid_posterior(prior, coin, one).weights[0], 0.6, 1e-14);
    EXPECT_NEAR(grid_posterior(prior, coin, two).weights[0], 3.0 / 7.0, 1e-14);
    EXPECT_NEAR(grid_posterior(prior, coin, twenty).weights[0], 0.9762202304703833, 1e-13);
}

TEST(Grid, PredictiveAndFairBet) {
    const GridPrior prior(std::vector<double>{0.75, 0.5}, std::vector<double>{0.5, 0.5});
    const GridLikelihood coin{GridFamily::Bernoulli};
    const ProbVector p = grid_predictive(prior, coin);
    EXPECT_DOUBLE_EQ(p.at("1"), 0.625);
    EXPECT_NEAR(fair_bet_ratio(p), 0.625 / 0.375, 1e-14);
    const std::vector<double> one{1};
    EXPECT_NEAR(grid_predictive(grid_posterior(prior, coin, one), coin).at("1"), 0.65, 1e-14);
    const GridPrior atom(std::vector<double>{0.5}, std::vector<double>{1.0});
    EXPECT_DOUBLE_EQ(grid_predictive(atom, coin).at("1"), 0.5);
}

TEST(Grid, LongSequencesStayFinite) {
    const GridPrior prior(std::vector<double>{0.75, 0.5}, std::vector<double>{0.5, 0.5});
    std::vector<double> xs(5000, 1.0);
    const GridPrior post = grid_posterior(prior, GridLikelihood{GridFamily::Bernoulli}, xs);
    EXPECT_NEAR(post.weights[0], 1.0, 1e-12);
    EXPECT_TRUE(std::isfinite(post.weights[0]));
}

TEST(Grid, SingleAtomIsFixedPoint) {
    const GridPrior atom(std::vector<double>{2.5}, std::vector<double>{1.0});
    const std::vector<double> xs{0, 4, 7};
    const GridPrior post = grid_posterior(atom, GridLikelihood{GridFamily::Poisson}, xs);
    ASSERT_EQ(post.support.size(), 1u);
    EXPECT_DOUBLE_EQ(post.weights[0], 1.0);
}

TEST(Grid, ImpossibleDataThrows) {
    const GridPrior prior(std::vector<double>{0.0001, 0.5}, std::vector<double>{0.5, 0.5});
    const std::vector<double> xs{2};
    EXPECT_THROW(grid_posterior(prior, GridLikelihood{GridFamily::Bernoulli}, xs), Error);
    EXPECT_THROW(GridPrior(std::vector<double>{0.2, 0.2}, std::vector<double>{0.5, 0.5}), DomainError);
    EXPECT_THROW(GridPrior(std::vector<double>{0.2, 0.3}, std::vector<double>{1.0, 0.0}), DomainError);
}

TEST(Event, DiagnosticTable) {
    EXPECT_NEAR(event_posterior(0.002, 0.99, 0.01), 0.1656, 5e-4);
    EXPECT_NEAR(event_posterior(0.010, 0.99, 0.01), 0.5, 5e-4);
    EXPECT_NEAR(event_posterior(0.100, 0.99, 0.01), 0.9167, 5e-4);
    EXPECT_NEAR(event_posterior(0.500, 0.99, 0.01), 0.99, 5e-4);
    for (double p : {0.1, 0.37, 0.9}) EXPECT_NEAR(event_posterior(p, 0.3, 0.3), p, 1e-15);
    EXPECT_THROW(event_posterior(0.0, 0.9, 0.0), Error);
}
