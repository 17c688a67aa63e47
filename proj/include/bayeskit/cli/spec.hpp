#pragma once

#include <Eigen/Dense>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "bayeskit/conjugate.hpp"
#include "bayeskit/decision.hpp"
#include "bayeskit/elicitation.hpp"
#include "bayeskit/inference.hpp"
#include "bayeskit/scoring.hpp"

namespace bayeskit::cli {

struct DataSpec {
    bool present = false;
    std::vector<double> values;            // raw observations, when given
    std::optional<SampleSummary> summary;  // summary given directly
    std::string source;                    // "inline", "summary" or the CSV path as written
};

struct PriorSpec {
    enum class Kind { Explicit, Jeffreys, Elicited };
    Kind kind = Kind::Explicit;
    std::optional<Distribution> distribution;  // Explicit
    Family family = Family::Beta;               // Elicited
    std::vector<Constraint> constraints;        // Elicited
};

struct TestSpec {
    std::string target = "posterior";  // prior, posterior, prior_predictive, posterior_predictive
    HypothesisPartition partition;
    std::optional<Eigen::MatrixXd> utilities;
    std::vector<std::string> actions;
};

struct ModelSpec {
    Likelihood likelihood = Likelihood::Bernoulli;
    double known = std::numeric_limits<double>::quiet_NaN();
    PriorSpec prior;
    DataSpec data;
    std::vector<EstimationUtility> estimates{EstimationUtility::Quadratic};
    double hpd_mass = 0.95;
    std::string hpd_target = "posterior";
    std::optional<TestSpec> test;
    std::vector<double> predict_points;
    std::size_t simulate = 0;
};

struct GridSpec {
    GridLikelihood likelihood;
    std::vector<double> support;
    std::vector<double> weights;
    DataSpec data;
    std::optional<double> stake;
};

struct EventSpec {
    std::vector<double> priors;
    double p_given_event = 0.0;
    double p_given_complement = 0.0;
};

struct DecisionSpec {
    DecisionProblem problem;
};

struct PortfolioSpec {
    Eigen::VectorXd returns;
    ProbVector probs;
    double rate = 0.0;
    std::vector<double> fractions;
    std::vector<double> risk_aversion;
};

struct VoiSpec {
    DecisionProblem problem;
    Experiment experiment;
};

// A tree whose branch costs may name parameters resolved at run time.
struct TreeDraft {
    TreeNode::Kind kind = TreeNode::Kind::Terminal;
    std::string id;
    double utility = 0.0;
    std::vector<std::string> labels;
    std::vector<double> probs;
    std::vector<std::variant<double, std::string>> costs;
    std::vector<TreeDraft> children;
};

struct TreeSpec {
    TreeDraft root;
    std::map<std::string, double> parameters;
};

struct ScoringSpec {
    struct Response {
        std::string id;
        ProbVector q;
        std::size_t correct;
    };
    std::string rule_name;
    ScoreRule rule;
    std::vector<std::string> labels;
    std::vector<Response> responses;
};

struct DiscrepancySpec {
    struct Discrete {
        ProbVector p, q;
    };
    struct BinomialPoisson {
        std::vector<int> n;
        std::vector<double> theta;
    };
    struct NormalApprox {
        std::vector<Distribution> targets;
    };
    std::variant<Discrete, BinomialPoisson, NormalApprox> body;
};

struct InfoSpec {
    struct Outcome {
        std::string label;
        double marginal;
        ProbVector posterior;
    };
    ProbVector prior;
    std::optional<ProbVector> posterior;
    std::vector<Outcome> outcomes;
};

using AnalysisBody = std::variant<ModelSpec, GridSpec, EventSpec, DecisionSpec, PortfolioSpec,
                                  VoiSpec, TreeSpec, ScoringSpec, DiscrepancySpec, InfoSpec>;

struct AnalysisSpec {
    std::string kind;  // top-level key naming the analysis
    std::string title;
    AnalysisBody body;
};

// Parses and validates a spec document. Throws SpecError listing every schema
// problem found; relative data paths resolve against base_dir.
AnalysisSpec parse_spec_text(const std::string& text, const std::string& base_dir);
AnalysisSpec parse_spec(const std::string& path);

TreeNode build_tree(const TreeSpec& spec);

}  // namespace bayeskit::cli
