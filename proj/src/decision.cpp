#include "bayeskit/decision.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <set>

#include "bayeskit/error.hpp"

namespace bayeskit {
namespace {

void check_labels(const std::vector<std::string>& labels, const char* what) {
    if (labels.empty()) throw DomainError(std::string("DecisionProblem: no ") + what);
    if (std::set<std::string>(labels.begin(), labels.end()).size() != labels.size()) {
        throw DomainError(std::string("DecisionProblem: duplicate ") + what + " labels");
    }
}

std::size_t find_label(const std::vector<std::string>& labels, const std::string& label,
                       const char* what) {
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels[i] == label) return i;
    }
    throw DomainError(std::string("unknown ") + what + " '" + label + "'");
}

std::size_t first_optimal(const DecisionProblem& p) {
    const Eigen::VectorXd eu = expected_utilities(p);
    Eigen::Index best = 0;
    eu.maxCoeff(&best);
    // Lowest index among ties, matching optimal_actions ordering.
    for (Eigen::Index i = 0; i < eu.size(); ++i) {
        if (eu(i) >= eu(best) - kTieTolerance) return static_cast<std::size_t>(i);
    }
    return static_cast<std::size_t>(best);
}

bool dominates(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    return (a.array() >= b.array()).all() && (a.array() > b.array()).any();
}

}  // namespace

DecisionProblem::DecisionProblem(std::vector<std::string> actions, std::vector<std::string> states,
                                 Eigen::MatrixXd utility, const ProbVector& probs)
    : actions_(std::move(actions)), states_(std::move(states)), utility_(std::move(utility)) {
    check_labels(actions_, "action");
    check_labels(states_, "state");
    if (static_cast<std::size_t>(utility_.rows()) != actions_.size() ||
        static_cast<std::size_t>(utility_.cols()) != states_.size()) {
        throw DomainError("DecisionProblem: utility matrix must be actions x states");
    }
    if (probs.size() != states_.size()) {
        throw DomainError("DecisionProblem: probability vector length differs from state count");
    }
    if (!utility_.allFinite()) throw DomainError("DecisionProblem: utilities must be finite");
    probs_ = probs.weights().transpose();
}

DecisionProblem::DecisionProblem(std::vector<std::string> actions, std::vector<std::string> states,
                                 Eigen::MatrixXd utility, Eigen::MatrixXd per_action_probs)
    : DecisionProblem(std::move(actions), std::move(states), std::move(utility),
                      ProbVector(Eigen::VectorXd(per_action_probs.row(0).transpose()))) {
    if (static_cast<std::size_t>(per_action_probs.rows()) != actions_.size() ||
        static_cast<std::size_t>(per_action_probs.cols()) != states_.size()) {
        throw DomainError("DecisionProblem: per-action probabilities must be actions x states");
    }
    for (Eigen::Index i = 0; i < per_action_probs.rows(); ++i) {
        ProbVector(Eigen::VectorXd(per_action_probs.row(i).transpose()));  // validates the row
    }
    probs_ = std::move(per_action_probs);
    per_action_ = true;
}

Eigen::VectorXd DecisionProblem::probs_for(std::size_t action) const {
    const Eigen::Index row = per_action_ ? static_cast<Eigen::Index>(action) : 0;
    return probs_.row(row).transpose();
}

ProbVector DecisionProblem::shared_probs() const {
    if (per_action_) throw DomainError("DecisionProblem: probabilities depend on the action");
    return ProbVector(states_, probs_.row(0).transpose());
}

std::size_t DecisionProblem::action_index(const std::string& label) const {
    return find_label(actions_, label, "action");
}

std::size_t DecisionProblem::state_index(const std::string& label) const {
    return find_label(states_, label, "state");
}

DecisionProblem DecisionProblem::with_probs(const ProbVector& probs) const {
    return DecisionProblem(actions_, states_, utility_, probs);
}

double expected_utility(const DecisionProblem& p, const std::string& action) {
    const std::size_t i = p.action_index(action);
    return p.utility().row(static_cast<Eigen::Index>(i)).dot(p.probs_for(i));
}

Eigen::VectorXd expected_utilities(const DecisionProblem& p) {
    Eigen::VectorXd eu(static_cast<Eigen::Index>(p.actions().size()));
    for (std::size_t i = 0; i < p.actions().size(); ++i) {
        eu(static_cast<Eigen::Index>(i)) = p.utility().row(static_cast<Eigen::Index>(i)).dot(p.probs_for(i));
    }
    return eu;
}

std::vector<std::string> optimal_actions(const DecisionProblem& p) {
    const Eigen::VectorXd eu = expected_utilities(p);
    const double best = eu.maxCoeff();
    std::vector<std::string> out;
    for (Eigen::Index i = 0; i < eu.size(); ++i) {
        if (eu(i) >= best - kTieTolerance) out.push_back(p.actions()[static_cast<std::size_t>(i)]);
    }
    return out;
}

std::vector<std::string> admissible_actions(const DecisionProblem& p) {
    const Eigen::MatrixXd& u = p.utility();
    std::vector<std::string> out;
    for (Eigen::Index i = 0; i < u.rows(); ++i) {
        bool dominated = false;
        for (Eigen::Index k = 0; k < u.rows() && !dominated; ++k) {
            if (k != i && dominates(u.row(k).transpose(), u.row(i).transpose())) dominated = true;
        }
        if (!dominated) out.push_back(p.actions()[static_cast<std::size_t>(i)]);
    }
    return out;
}

double opportunity_loss(const DecisionProblem& p, const std::string& action,
                        const std::string& state) {
    const auto i = static_cast<Eigen::Index>(p.action_index(action));
    const auto j = static_cast<Eigen::Index>(p.state_index(state));
    return p.utility().col(j).maxCoeff() - p.utility()(i, j);
}

double evpi(const DecisionProblem& p) {
    const std::size_t a0 = first_optimal(p);
    const Eigen::VectorXd probs = p.probs_for(a0);
    const Eigen::MatrixXd& u = p.utility();
    double total = 0.0;
    for (Eigen::Index j = 0; j < u.cols(); ++j) {
        total += (u.col(j).maxCoeff() - u(static_cast<Eigen::Index>(a0), j)) * probs(j);
    }
    return total;
}

ChanceUpdate chance_update(const ProbVector& prior, const Eigen::VectorXd& likelihood) {
    if (static_cast<std::size_t>(likelihood.size()) != prior.size()) {
        throw DomainError("chance_update: likelihood length differs from state count");
    }
    if ((likelihood.array() < 0.0).any() || (likelihood.array() > 1.0).any()) {
        throw DomainError("chance_update: likelihood values must lie in [0, 1]");
    }
    const Eigen::VectorXd joint = prior.weights().cwiseProduct(likelihood);
    const double marginal = joint.sum();
    if (!(marginal > 0.0)) throw DomainError("chance_update: observation has zero probability");
    return {ProbVector::normalized(prior.labels(), joint), marginal};
}

namespace {

void check_experiment(const DecisionProblem& base, const Experiment& e) {
    if (base.per_action()) {
        throw DomainError("value of information requires action-independent state probabilities");
    }
    const auto m = static_cast<Eigen::Index>(base.states().size());
    if (e.likelihood.cols() != m || static_cast<std::size_t>(e.likelihood.rows()) != e.outcomes.size()) {
        throw DomainError("experiment: likelihood must be outcomes x states");
    }
    if (e.cost.size() != e.likelihood.rows()) {
        throw DomainError("experiment: one cost per outcome is required");
    }
    for (Eigen::Index j = 0; j < m; ++j) {
        if (std::abs(e.likelihood.col(j).sum() - 1.0) > 1e-12) {
            throw DomainError("experiment: outcome probabilities must sum to 1 for every state");
        }
    }
}

}  // namespace

Eigen::VectorXd outcome_marginals(const DecisionProblem& base, const Experiment& e) {
    check_experiment(base, e);
    return e.likelihood * base.probs_for(0);
}

double value_of_data(const DecisionProblem& base, const Experiment& e, std::size_t datum) {
    check_experiment(base, e);
    if (datum >= e.outcomes.size()) throw DomainError("value_of_data: datum index out of range");
    const auto i = static_cast<Eigen::Index>(datum);
    const ChanceUpdate upd = chance_update(base.shared_probs(), e.likelihood.row(i).transpose());
    const DecisionProblem after = base.with_probs(upd.posterior);
    const auto a_post = static_cast<Eigen::Index>(first_optimal(after));
    const auto a_prior = static_cast<Eigen::Index>(first_optimal(base));
    const Eigen::VectorXd gain = base.utility().row(a_post) - base.utility().row(a_prior);
    return gain.dot(upd.posterior.weights()) - e.cost(i);
}

double value_of_experiment(const DecisionProblem& base, const Experiment& e) {
    const Eigen::VectorXd marg = outcome_marginals(base, e);
    double total = 0.0;
    for (Eigen::Index i = 0; i < marg.size(); ++i) {
        if (marg(i) > 0.0) total += marg(i) * value_of_data(base, e, static_cast<std::size_t>(i));
    }
    return total;
}

TreeNode TreeNode::terminal(double utility, std::string id) {
    TreeNode n;
    n.kind = Kind::Terminal;
    n.utility = utility;
    n.id = std::move(id);
    return n;
}

TreeNode TreeNode::decision(std::vector<std::string> labels, std::vector<TreeNode> children,
                            std::string id, std::vector<double> costs) {
    TreeNode n;
    n.kind = Kind::Decision;
    n.labels = std::move(labels);
    n.children = std::move(children);
    n.id = std::move(id);
    n.costs = std::move(costs);
    return n;
}

TreeNode TreeNode::chance(std::vector<std::string> labels, std::vector<double> probs,
                          std::vector<TreeNode> children, std::string id, std::vector<double> costs) {
    TreeNode n = decision(std::move(labels), std::move(children), std::move(id), std::move(costs));
    n.kind = Kind::Chance;
    n.probs = std::move(probs);
    return n;
}

namespace {

void validate_node(TreeNode& n, const std::string& path, std::set<std::string>& ids) {
    if (n.id.empty()) n.id = path;
    if (!ids.insert(n.id).second) throw DomainError("tree: duplicate node id '" + n.id + "'");
    if (n.kind == TreeNode::Kind::Terminal) {
        if (!n.children.empty()) throw DomainError("tree: terminal node '" + n.id + "' has children");
        if (!std::isfinite(n.utility)) throw DomainError("tree: non-finite utility at '" + n.id + "'");
        return;
    }
    if (n.children.empty()) throw DomainError("tree: node '" + n.id + "' has no branches");
    if (n.labels.size() != n.children.size()) {
        throw DomainError("tree: node '" + n.id + "' has mismatched labels and children");
    }
    if (n.costs.empty()) n.costs.assign(n.children.size(), 0.0);
    if (n.costs.size() != n.children.size()) {
        throw DomainError("tree: node '" + n.id + "' has mismatched branch costs");
    }
    if (n.kind == TreeNode::Kind::Chance) {
        if (n.probs.size() != n.children.size()) {
            throw DomainError("tree: chance node '" + n.id + "' needs one probability per branch");
        }
        double total = 0.0;
        for (double p : n.probs) {
            if (!(p >= 0.0 && p <= 1.0)) throw DomainError("tree: probability outside [0, 1] at '" + n.id + "'");
            total += p;
        }
        if (std::abs(total - 1.0) > 1e-12) {
            throw DomainError("tree: probabilities at '" + n.id + "' do not sum to 1");
        }
    }
    for (std::size_t i = 0; i < n.children.size(); ++i) {
        validate_node(n.children[i], path + "/" + n.labels[i], ids);
    }
}

double solve_node(const TreeNode& n, std::vector<PolicyChoice>& policy) {
    switch (n.kind) {
        case TreeNode::Kind::Terminal:
            return n.utility;
        case TreeNode::Kind::Chance: {
            double v = 0.0;
            for (std::size_t i = 0; i < n.children.size(); ++i) {
                v += n.probs[i] * (solve_node(n.children[i], policy) - n.costs[i]);
            }
            return v;
        }
        case TreeNode::Kind::Decision: {
            const std::size_t slot = policy.size();
            policy.push_back({n.id, {}, 0.0});
            std::vector<double> values;
            for (std::size_t i = 0; i < n.children.size(); ++i) {
                values.push_back(solve_node(n.children[i], policy) - n.costs[i]);
            }
            const double best = *std::max_element(values.begin(), values.end());
            for (std::size_t i = 0; i < values.size(); ++i) {
                if (values[i] >= best - kTieTolerance) policy[slot].chosen.push_back(n.labels[i]);
            }
            policy[slot].value = best;
            return best;
        }
    }
    return 0.0;
}

}  // namespace

TreeNode validated_tree(TreeNode root) {
    std::set<std::string> ids;
    validate_node(root, "root", ids);
    return root;
}

PolicyValue solve_tree(const TreeNode& root) {
    const TreeNode tree = validated_tree(root);
    PolicyValue out{0.0, {}};
    out.value = solve_node(tree, out.policy);
    return out;
}

PortfolioOptimum optimal_portfolio_weight(const Eigen::VectorXd& returns, const ProbVector& probs,
                                          double rate, double risk_aversion) {
    if (static_cast<std::size_t>(returns.size()) != probs.size()) {
        throw DomainError("portfolio: one probability per return scenario is required");
    }
    if (risk_aversion == 0.0) {
        throw DomainError("portfolio: A = 0 gives a linear utility with an unbounded optimum");
    }
    if (!(risk_aversion > 0.0)) throw DomainError("portfolio: risk aversion A must be positive");
    const double ex = returns.dot(probs.weights());
    const double var = (returns.array() - ex).square().matrix().dot(probs.weights());
    const double xbar = returns.mean();
    const double delta = var + (xbar - ex) * (xbar - ex);
    if (!(delta > 0.0)) throw DomainError("portfolio: scenario dispersion delta must be positive");
    const double rho = ex - rate;
    return {rho / (2.0 * risk_aversion * delta), rho * rho / (4.0 * risk_aversion * delta) + rate,
            rho, delta};
}

DecisionProblem portfolio_problem(const std::vector<double>& fractions,
                                  const Eigen::VectorXd& returns, const ProbVector& probs,
                                  double rate, double risk_aversion) {
    if (static_cast<std::size_t>(returns.size()) != probs.size()) {
        throw DomainError("portfolio: one probability per return scenario is required");
    }
    if (risk_aversion < 0.0) throw DomainError("portfolio: risk aversion A must be nonnegative");
    const double xbar = returns.mean();
    Eigen::MatrixXd u(static_cast<Eigen::Index>(fractions.size()), returns.size());
    std::vector<std::string> actions;
    for (std::size_t i = 0; i < fractions.size(); ++i) {
        const double a = fractions[i];
        for (Eigen::Index j = 0; j < returns.size(); ++j) {
            const double dev = xbar - returns(j);
            u(static_cast<Eigen::Index>(i), j) =
                a * returns(j) + (1.0 - a) * rate - a * a * risk_aversion * dev * dev;
        }
        actions.push_back("a" + std::to_string(i + 1));
    }
    return DecisionProblem(std::move(actions), probs.labels(), std::move(u), probs);
}

}  // namespace bayeskit
