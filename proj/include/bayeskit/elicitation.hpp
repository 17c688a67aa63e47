#pragma once

#include <span>
#include <string>
#include <vector>

#include "bayeskit/distribution.hpp"

namespace bayeskit {

struct Constraint {
    enum class Kind { Mean, Mode, Quantile, IntervalMass };

    Kind kind;
    double a = 0.0;  // Mean/Mode: value; Quantile: level; IntervalMass: lower
    double b = 0.0;  // Quantile: value; IntervalMass: upper
    double c = 0.0;  // IntervalMass: mass

    static Constraint mean(double value) { return {Kind::Mean, value}; }
    static Constraint mode(double value) { return {Kind::Mode, value}; }
    static Constraint quantile(double level, double value) { return {Kind::Quantile, level, value}; }
    static Constraint interval_mass(double lo, double hi, double mass) {
        return {Kind::IntervalMass, lo, hi, mass};
    }

    bool is_probability() const { return kind == Kind::Quantile || kind == Kind::IntervalMass; }
};

std::string describe(const Constraint& c);

// Signed residual of a constraint under a candidate distribution. Probability
// constraints give an absolute difference, moment constraints a relative one.
double residual(const Distribution& d, const Constraint& c);

struct ElicitationReport {
    Distribution distribution;
    std::vector<double> residuals;
    std::string method;       // "closed-form", "bracketed-1d" or "newton-2d"
    double search_lower = 0;  // bounds of the 1-D search, when one was run
    double search_upper = 0;
};

// Accepts Beta, Gamma and NormalPrecision targets with exactly two constraints.
ElicitationReport elicit_report(Family family, std::span<const Constraint> constraints);
Distribution elicit(Family family, std::span<const Constraint> constraints);

}  // namespace bayeskit
