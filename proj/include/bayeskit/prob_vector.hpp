#pragma once

#include <Eigen/Dense>
#include <initializer_list>
#include <string>
#include <vector>

namespace bayeskit {

// Finite probability distribution over labeled outcomes.
class ProbVector {
public:
    ProbVector() = default;
    // Weights must be nonnegative and sum to one within 1e-12.
    ProbVector(std::vector<std::string> labels, Eigen::VectorXd weights);
    // Labels default to "0", "1", ...
    explicit ProbVector(Eigen::VectorXd weights);
    ProbVector(std::initializer_list<double> weights);

    // Rescales nonnegative weights to unit sum.
    static ProbVector normalized(std::vector<std::string> labels, Eigen::VectorXd weights);

    std::size_t size() const { return static_cast<std::size_t>(weights_.size()); }
    const std::vector<std::string>& labels() const { return labels_; }
    const Eigen::VectorXd& weights() const { return weights_; }
    double operator[](std::size_t i) const { return weights_(static_cast<Eigen::Index>(i)); }

    // Throws DomainError for an unknown label.
    std::size_t index_of(const std::string& label) const;
    double at(const std::string& label) const { return (*this)[index_of(label)]; }

    bool strictly_positive() const;

private:
    std::vector<std::string> labels_;
    Eigen::VectorXd weights_;
};

std::vector<std::string> default_labels(std::size_t n);

}  // namespace bayeskit
