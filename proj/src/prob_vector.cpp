#include "bayeskit/prob_vector.hpp"

#include <cmath>
#include <set>

#include "bayeskit/error.hpp"

namespace bayeskit {

std::vector<std::string> default_labels(std::size_t n) {
    std::vector<std::string> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) out.push_back(std::to_string(i));
    return out;
}

ProbVector::ProbVector(std::vector<std::string> labels, Eigen::VectorXd weights)
    : labels_(std::move(labels)), weights_(std::move(weights)) {
    if (labels_.size() != size()) throw DomainError("ProbVector: label count differs from weights");
    if (size() == 0) throw DomainError("ProbVector: empty");
    if (std::set<std::string>(labels_.begin(), labels_.end()).size() != labels_.size()) {
        throw DomainError("ProbVector: duplicate labels");
    }
    for (Eigen::Index i = 0; i < weights_.size(); ++i) {
        if (!(weights_(i) >= 0.0) || !std::isfinite(weights_(i))) {
            throw DomainError("ProbVector: weights must be finite and nonnegative");
        }
    }
    if (std::abs(weights_.sum() - 1.0) > 1e-12) {
        throw DomainError("ProbVector: weights must sum to 1");
    }
}

ProbVector::ProbVector(Eigen::VectorXd weights)
    : ProbVector(default_labels(static_cast<std::size_t>(weights.size())), Eigen::VectorXd(weights)) {}

ProbVector::ProbVector(std::initializer_list<double> weights)
    : ProbVector(Eigen::Map<const Eigen::VectorXd>(weights.begin(),
                                                    static_cast<Eigen::Index>(weights.size()))) {}

ProbVector ProbVector::normalized(std::vector<std::string> labels, Eigen::VectorXd weights) {
    const double total = weights.sum();
    if (!(total > 0.0) || !std::isfinite(total)) {
        throw DomainError("ProbVector: cannot normalize weights with nonpositive total");
    }
    weights /= total;
    return ProbVector(std::move(labels), std::move(weights));
}

std::size_t ProbVector::index_of(const std::string& label) const {
    for (std::size_t i = 0; i < labels_.size(); ++i) {
        if (labels_[i] == label) return i;
    }
    throw DomainError("ProbVector: unknown label '" + label + "'");
}

bool ProbVector::strictly_positive() const { return (weights_.array() > 0.0).all(); }

}  // namespace bayeskit
