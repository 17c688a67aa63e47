#include "bayeskit/inference.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "bayeskit/decision.hpp"
#include "bayeskit/error.hpp"
#include "bayeskit/numeric.hpp"

namespace bayeskit {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr int kHpdGrid = 2000;

double cdf_at(const Distribution& d, double x) {
    if (x == kInf) return 1.0;
    if (x == -kInf) return 0.0;
    return cdf(d, x);
}

// Clips a region to the support; discrete regions are snapped to integers.
std::optional<Interval> normalized_region(const Distribution& d, Interval r) {
    const Support s = support(d);
    if (d.is_discrete()) {
        r.lower = std::ceil(r.lower);
        r.upper = std::floor(r.upper);
    }
    r.lower = std::max(r.lower, s.lower);
    r.upper = std::min(r.upper, s.upper);
    if (d.is_discrete() ? r.upper < r.lower : r.upper <= r.lower) return std::nullopt;
    return r;
}

double density_or_max(const Distribution& d, double x) {
    const double f = density(d, x);
    return std::isinf(f) ? std::numeric_limits<double>::max() : f;
}

}  // namespace

double point_estimate(const Distribution& posterior, EstimationUtility utility) {
    switch (utility) {
        case EstimationUtility::Quadratic:
            return mean(posterior);
        case EstimationUtility::Absolute:
            return quantile(posterior, 0.5);
        case EstimationUtility::RelativeQuadratic: {
            const double m = mean(posterior);
            if (!(m > 0.0)) {
                throw DomainError("relative quadratic estimate requires a positive mean");
            }
            return (variance(posterior) + m * m) / m;
        }
    }
    return 0.0;
}

HypothesisPartition completed(const HypothesisPartition& part, const Distribution& dist) {
    if (part.hypotheses.empty()) throw DomainError("hypotheses: partition is empty");
    struct Tagged {
        Interval r;
        std::size_t owner;
    };
    std::vector<Tagged> regions;
    for (std::size_t h = 0; h < part.hypotheses.size(); ++h) {
        const Hypothesis& hyp = part.hypotheses[h];
        if (hyp.label == kResidualLabel) {
            throw DomainError(std::string("hypotheses: label '") + kResidualLabel + "' is reserved");
        }
        for (const Interval& r : hyp.regions) {
            if (!(r.lower <= r.upper) || std::isnan(r.lower)) {
                throw DomainError("hypotheses: region of '" + hyp.label + "' has lower > upper");
            }
            if (auto n = normalized_region(dist, r)) regions.push_back({*n, h});
        }
    }
    std::sort(regions.begin(), regions.end(),
              [](const Tagged& a, const Tagged& b) { return a.r.lower < b.r.lower; });
    const bool discrete = dist.is_discrete();
    for (std::size_t i = 1; i < regions.size(); ++i) {
        const bool overlap = discrete ? regions[i].r.lower <= regions[i - 1].r.upper
                                      : regions[i].r.lower < regions[i - 1].r.upper;
        if (overlap) {
            throw DomainError("hypotheses: regions of '" + part.hypotheses[regions[i - 1].owner].label +
                              "' and '" + part.hypotheses[regions[i].owner].label + "' overlap");
        }
    }
    const Support s = support(dist);
    Hypothesis residual{kResidualLabel, {}};
    double cursor = s.lower;
    bool exhausted = false;
    for (const Tagged& t : regions) {
        if (discrete && t.r.lower > cursor) residual.regions.push_back({cursor, t.r.lower - 1.0});
        if (!discrete && t.r.lower > cursor) residual.regions.push_back({cursor, t.r.lower});
        if (t.r.upper >= s.upper) {
            exhausted = true;
            break;
        }
        cursor = discrete ? t.r.upper + 1.0 : t.r.upper;
    }
    if (!exhausted) residual.regions.push_back({cursor, s.upper});
    HypothesisPartition out = part;
    if (!residual.regions.empty()) out.hypotheses.push_back(residual);
    return out;
}

double region_probability(const Distribution& d, const Interval& region) {
    const auto r = normalized_region(d, region);
    if (!r) return 0.0;
    if (d.is_discrete()) return cdf_at(d, r->upper) - (r->lower <= 0.0 ? 0.0 : cdf_at(d, r->lower - 1.0));
    return cdf_at(d, r->upper) - cdf_at(d, r->lower);
}

ProbVector hypothesis_probabilities(const Distribution& dist, const HypothesisPartition& part) {
    const HypothesisPartition full = completed(part, dist);
    std::vector<std::string> labels;
    Eigen::VectorXd p(static_cast<Eigen::Index>(full.hypotheses.size()));
    for (std::size_t h = 0; h < full.hypotheses.size(); ++h) {
        labels.push_back(full.hypotheses[h].label);
        double total = 0.0;
        for (const Interval& r : full.hypotheses[h].regions) total += region_probability(dist, r);
        p(static_cast<Eigen::Index>(h)) = std::max(0.0, total);
    }
    if (std::abs(p.sum() - 1.0) > 1e-6) {
        throw NumericError("hypothesis probabilities sum to " + std::to_string(p.sum()));
    }
    return ProbVector::normalized(std::move(labels), std::move(p));
}

ContrastReport contrast(const Distribution& dist, const HypothesisPartition& part,
                        const std::optional<Eigen::MatrixXd>& utility,
                        std::vector<std::string> action_labels) {
    const ProbVector probs = hypothesis_probabilities(dist, part);
    const auto m = static_cast<Eigen::Index>(probs.size());
    Eigen::MatrixXd u;
    if (utility) {
        u = *utility;
        if (u.cols() != m) {
            throw DomainError("contrast: utility matrix has " + std::to_string(u.cols()) +
                              " columns but the partition has " + std::to_string(m) + " hypotheses");
        }
        if (action_labels.empty()) {
            for (Eigen::Index i = 0; i < u.rows(); ++i) action_labels.push_back("a" + std::to_string(i + 1));
        }
    } else {
        u = Eigen::MatrixXd::Identity(m, m);
        if (action_labels.empty()) action_labels = probs.labels();
    }
    if (static_cast<Eigen::Index>(action_labels.size()) != u.rows()) {
        throw DomainError("contrast: one action label per utility row is required");
    }
    const DecisionProblem problem(action_labels, probs.labels(), u, probs);
    return {action_labels, optimal_actions(problem), probs, expected_utilities(problem)};
}

std::vector<Interval> hpd_region(const Distribution& dist, double mass) {
    if (dist.is_discrete()) throw DomainError("hpd_region: discrete distributions are not supported");
    if (dist.family() == Family::NormalGamma) throw DomainError("hpd_region: requires a univariate law");
    if (!(mass > 0.0 && mass < 1.0)) throw DomainError("hpd_region: mass must lie in (0, 1)");

    const Support s = support(dist);
    std::vector<double> xs;
    if (std::isfinite(s.lower)) xs.push_back(s.lower);
    for (int i = 0; i <= kHpdGrid; ++i) {
        const double u = 1e-10 + (1.0 - 2e-10) * i / kHpdGrid;
        xs.push_back(quantile(dist, u));
    }
    if (std::isfinite(s.upper)) xs.push_back(s.upper);
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    std::vector<double> fs;
    for (double x : xs) fs.push_back(density_or_max(dist, x));

    const auto level_set = [&](double c) {
        std::vector<Interval> out;
        const auto crossing = [&](double a, double b) {
            return numeric::find_root([&](double x) { return density_or_max(dist, x) - c; }, a, b, 1e-13);
        };
        std::optional<double> start;
        for (std::size_t i = 0; i < xs.size(); ++i) {
            const bool inside = fs[i] >= c;
            if (inside && !start) start = i == 0 ? xs[0] : crossing(xs[i - 1], xs[i]);
            if (!inside && start) {
                out.push_back({*start, crossing(xs[i - 1], xs[i])});
                start.reset();
            }
        }
        if (start) out.push_back({*start, xs.back()});
        return out;
    };
    const auto enclosed = [&](const std::vector<Interval>& rs) {
        double total = 0.0;
        for (const Interval& r : rs) total += cdf(dist, r.upper) - cdf(dist, r.lower);
        return total;
    };

    double lo = 0.0;
    double hi = *std::max_element(fs.begin(), fs.end());
    std::vector<Interval> best = level_set(lo);
    for (int it = 0; it < 200; ++it) {
        const double c = 0.5 * (lo + hi);
        if (c <= lo || c >= hi) break;
        const auto rs = level_set(c);
        const double m = enclosed(rs);
        if (m >= mass) {
            lo = c;
            best = rs;
            if (m - mass < 1e-12) break;
        } else {
            hi = c;
        }
    }
    return best;
}

Interval equal_tailed_interval(const Distribution& dist, double mass) {
    if (!(mass > 0.0 && mass < 1.0)) throw DomainError("equal_tailed_interval: mass must lie in (0, 1)");
    const double tail = 0.5 * (1.0 - mass);
    return {quantile(dist, tail), quantile(dist, 1.0 - tail)};
}

}  // namespace bayeskit
