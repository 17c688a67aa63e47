#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "bayeskit/prob_vector.hpp"

namespace bayeskit {

inline constexpr double kTieTolerance = 1e-9;

// Finite action x state problem. Probabilities are either shared by every
// action or given per action (one row per action).
class DecisionProblem {
public:
    DecisionProblem(std::vector<std::string> actions, std::vector<std::string> states,
                    Eigen::MatrixXd utility, const ProbVector& probs);
    DecisionProblem(std::vector<std::string> actions, std::vector<std::string> states,
                    Eigen::MatrixXd utility, Eigen::MatrixXd per_action_probs);

    const std::vector<std::string>& actions() const { return actions_; }
    const std::vector<std::string>& states() const { return states_; }
    const Eigen::MatrixXd& utility() const { return utility_; }
    bool per_action() const { return per_action_; }
    // State probabilities faced when taking action i.
    Eigen::VectorXd probs_for(std::size_t action) const;
    // Shared state probabilities; throws if the problem is per-action.
    ProbVector shared_probs() const;

    std::size_t action_index(const std::string& label) const;
    std::size_t state_index(const std::string& label) const;

    DecisionProblem with_probs(const ProbVector& probs) const;

private:
    std::vector<std::string> actions_;
    std::vector<std::string> states_;
    Eigen::MatrixXd utility_;
    Eigen::MatrixXd probs_;  // 1 x m when shared, k x m otherwise
    bool per_action_ = false;
};

double expected_utility(const DecisionProblem& p, const std::string& action);
Eigen::VectorXd expected_utilities(const DecisionProblem& p);
// Every action within kTieTolerance of the best expected utility, in declaration order.
std::vector<std::string> optimal_actions(const DecisionProblem& p);
std::vector<std::string> admissible_actions(const DecisionProblem& p);

double opportunity_loss(const DecisionProblem& p, const std::string& action,
                        const std::string& state);
// Expected opportunity loss of the first prior-optimal action.
double evpi(const DecisionProblem& p);

struct ChanceUpdate {
    ProbVector posterior;
    double marginal;
};

ChanceUpdate chance_update(const ProbVector& prior, const Eigen::VectorXd& likelihood);

// Likelihood table P(D_i | E_j): one row per outcome, one column per state.
struct Experiment {
    std::vector<std::string> outcomes;
    Eigen::MatrixXd likelihood;
    Eigen::VectorXd cost;  // c(e, D_i); additive utility penalty
};

// Expected value of observing D_i, relative to deciding without the experiment.
double value_of_data(const DecisionProblem& base, const Experiment& e, std::size_t datum);
double value_of_experiment(const DecisionProblem& base, const Experiment& e);
// Marginal probabilities P(D_i | e).
Eigen::VectorXd outcome_marginals(const DecisionProblem& base, const Experiment& e);

// Sequential problems.
struct TreeNode {
    enum class Kind { Decision, Chance, Terminal };

    Kind kind = Kind::Terminal;
    std::string id;
    std::vector<std::string> labels;
    std::vector<TreeNode> children;
    std::vector<double> probs;  // Chance only
    std::vector<double> costs;  // per-branch amount subtracted from the child's value
    double utility = 0.0;       // Terminal only

    static TreeNode terminal(double utility, std::string id = {});
    static TreeNode decision(std::vector<std::string> labels, std::vector<TreeNode> children,
                             std::string id = {}, std::vector<double> costs = {});
    static TreeNode chance(std::vector<std::string> labels, std::vector<double> probs,
                           std::vector<TreeNode> children, std::string id = {},
                           std::vector<double> costs = {});
};

// Checks structure and probabilities; assigns path ids to unnamed nodes.
TreeNode validated_tree(TreeNode root);

struct PolicyChoice {
    std::string node;
    std::vector<std::string> chosen;  // several entries on ties
    double value;
};

struct PolicyValue {
    double value;
    std::vector<PolicyChoice> policy;  // decision nodes in depth-first order
};

PolicyValue solve_tree(const TreeNode& root);

struct PortfolioOptimum {
    double weight;     // a*
    double value;      // expected risk-adjusted utility at a*
    double rho;        // E(X) - r
    double delta;      // Var(X) + (xbar - E(X))^2
};

PortfolioOptimum optimal_portfolio_weight(const Eigen::VectorXd& returns, const ProbVector& probs,
                                          double rate, double risk_aversion);

// Utilities a*x + (1-a)*r minus a^2 * A * (xbar - x)^2 for each fraction a.
DecisionProblem portfolio_problem(const std::vector<double>& fractions,
                                  const Eigen::VectorXd& returns, const ProbVector& probs,
                                  double rate, double risk_aversion);

}  // namespace bayeskit
