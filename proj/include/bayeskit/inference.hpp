#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "bayeskit/distribution.hpp"
#include "bayeskit/prob_vector.hpp"

namespace bayeskit {

enum class EstimationUtility {
    Quadratic,          // -(t - theta)^2      -> mean
    Absolute,           // -|t - theta|        -> median
    RelativeQuadratic,  // -((t - theta)/t)^2  -> E[theta^2] / E[theta]
};

double point_estimate(const Distribution& posterior, EstimationUtility utility);

// Closed interval; for discrete laws it denotes the integers it contains.
struct Interval {
    double lower;
    double upper;
};

struct Hypothesis {
    std::string label;
    std::vector<Interval> regions;
};

struct HypothesisPartition {
    std::vector<Hypothesis> hypotheses;
};

inline constexpr const char* kResidualLabel = "residual";

// Validates disjointness and appends a residual hypothesis covering whatever
// part of the support the given regions leave out.
HypothesisPartition completed(const HypothesisPartition& part, const Distribution& dist);

double region_probability(const Distribution& dist, const Interval& region);
ProbVector hypothesis_probabilities(const Distribution& dist, const HypothesisPartition& part);

struct ContrastReport {
    std::vector<std::string> actions;
    std::vector<std::string> chosen;
    ProbVector probabilities;
    Eigen::VectorXd expected_utilities;
};

// Without a utility matrix every action "accept H_i" earns 1 when H_i holds.
// With one (actions x hypotheses of the completed partition) the choice maximizes
// expected utility.
ContrastReport contrast(const Distribution& dist, const HypothesisPartition& part,
                        const std::optional<Eigen::MatrixXd>& utility = std::nullopt,
                        std::vector<std::string> action_labels = {});

// Highest-density region of a continuous law. Returned intervals are sorted and disjoint.
std::vector<Interval> hpd_region(const Distribution& dist, double mass);
Interval equal_tailed_interval(const Distribution& dist, double mass);

}  // namespace bayeskit
