#include "bayeskit/elicitation.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <functional>
#include <optional>
#include <sstream>

#include "bayeskit/error.hpp"
#include "bayeskit/numeric.hpp"
#include "bayeskit/special.hpp"

namespace bayeskit {
namespace {

constexpr double kSearchLower = 1e-3;
constexpr double kSearchUpper = 1e7;
constexpr int kScanPoints = 400;
constexpr double kProbTol = 1e-4;
constexpr double kMomentTol = 1e-6;

using Builder = std::function<Distribution(double)>;

double mode_of(const Distribution& d) {
    const auto p = d.params();
    switch (d.family()) {
        case Family::Beta:
            if (!(p[0] > 1.0 && p[1] > 1.0)) throw MomentError("Beta: interior mode requires alpha, beta > 1");
            return (p[0] - 1.0) / (p[0] + p[1] - 2.0);
        case Family::Gamma:
            if (!(p[0] >= 1.0)) throw MomentError("Gamma: mode requires shape >= 1");
            return (p[0] - 1.0) / p[1];
        case Family::NormalPrecision:
            return p[0];
        default:
            throw DomainError("mode: unsupported family");
    }
}

void validate(Family family, std::span<const Constraint> cs) {
    if (family != Family::Beta && family != Family::Gamma && family != Family::NormalPrecision) {
        throw DomainError("elicit: supported families are Beta, Gamma and NormalPrecision");
    }
    if (cs.size() != 2) {
        throw DomainError("elicit: expected exactly 2 constraints, got " + std::to_string(cs.size()));
    }
    int location = 0;
    for (const Constraint& c : cs) {
        switch (c.kind) {
            case Constraint::Kind::Mean:
            case Constraint::Kind::Mode:
                ++location;
                if (!std::isfinite(c.a)) throw DomainError("elicit: non-finite moment value");
                if (family == Family::Beta && !(c.a > 0.0 && c.a < 1.0)) {
                    throw DomainError("elicit: Beta mean/mode must lie in (0, 1)");
                }
                if (family == Family::Gamma && !(c.a > 0.0)) {
                    throw DomainError("elicit: Gamma mean/mode must be positive");
                }
                break;
            case Constraint::Kind::Quantile:
                if (!(c.a > 0.0 && c.a < 1.0)) throw DomainError("elicit: quantile level must lie in (0, 1)");
                if (!std::isfinite(c.b)) throw DomainError("elicit: non-finite quantile value");
                break;
            case Constraint::Kind::IntervalMass:
                if (!(c.a < c.b)) throw DomainError("elicit: interval requires lo < hi");
                if (!(c.c > 0.0 && c.c < 1.0)) throw DomainError("elicit: interval mass must lie in (0, 1)");
                break;
        }
    }
    const bool same_kind = cs[0].kind == cs[1].kind && !cs[0].is_probability();
    if (same_kind || (family == Family::NormalPrecision && location == 2)) {
        throw DomainError("elicit: constraints are not independent (under-determined)");
    }
}

std::vector<double> residuals_of(const Distribution& d, std::span<const Constraint> cs) {
    std::vector<double> out;
    for (const Constraint& c : cs) out.push_back(residual(d, c));
    return out;
}

bool satisfied(const std::vector<double>& res, std::span<const Constraint> cs) {
    for (std::size_t i = 0; i < cs.size(); ++i) {
        const double tol = cs[i].is_probability() ? kProbTol : kMomentTol;
        if (!(std::abs(res[i]) <= tol)) return false;
    }
    return true;
}

[[noreturn]] void fail(const std::string& why, const std::vector<double>& res) {
    std::ostringstream msg;
    msg << "elicit: no solution (" << why << ")";
    if (!res.empty()) {
        msg << "; final residuals";
        for (double r : res) msg << ' ' << r;
    }
    throw NumericError(msg.str());
}

std::optional<double> safe_residual(const Builder& build, const Constraint& c, double t) {
    try {
        const double r = residual(build(t), c);
        if (std::isfinite(r)) return r;
    } catch (const Error&) {
    }
    return std::nullopt;
}

// Scans t on a log grid for sign changes of the residual and refines each by Brent.
// When several roots exist the most concentrated one (largest t) is kept.
ElicitationReport search_1d(const Builder& build, const Constraint& target,
                            std::span<const Constraint> all, double lo, double hi) {
    const double llo = std::log(lo), lhi = std::log(hi);
    std::optional<double> prev;
    double prev_t = 0.0;
    double best = std::numeric_limits<double>::infinity();
    std::optional<double> root;
    for (int i = 0; i <= kScanPoints; ++i) {
        const double lt = llo + (lhi - llo) * i / kScanPoints;
        const auto r = safe_residual(build, target, std::exp(lt));
        if (!r) {
            prev.reset();
            continue;
        }
        best = std::min(best, std::abs(*r));
        if (prev && ((*prev < 0.0) != (*r < 0.0) || *r == 0.0)) {
            const auto f = [&](double u) { return residual(build(std::exp(u)), target); };
            root = *r == 0.0 ? lt : numeric::find_root(f, prev_t, lt, 1e-14);
        }
        prev = r;
        prev_t = lt;
    }
    if (root) {
        const Distribution d = build(std::exp(*root));
        const auto res = residuals_of(d, all);
        if (!satisfied(res, all)) fail("refined root misses tolerance", res);
        return {d, res, "bracketed-1d", lo, hi};
    }
    std::ostringstream why;
    why << "no sign change over [" << lo << ", " << hi << "], smallest |residual| " << best;
    fail(why.str(), {});
}

// Damped Newton on two unknowns from several starting points.
ElicitationReport newton_2d(const std::function<Distribution(const Eigen::Vector2d&)>& build,
                            std::span<const Constraint> cs,
                            const std::vector<Eigen::Vector2d>& starts) {
    const auto F = [&](const Eigen::Vector2d& u) -> std::optional<Eigen::Vector2d> {
        try {
            const Distribution d = build(u);
            Eigen::Vector2d r(residual(d, cs[0]), residual(d, cs[1]));
            if (r.allFinite()) return r;
        } catch (const Error&) {
        }
        return std::nullopt;
    };
    std::vector<double> best_res;
    double best_norm = std::numeric_limits<double>::infinity();
    for (Eigen::Vector2d u : starts) {
        auto r = F(u);
        if (!r) continue;
        for (int it = 0; it < 200 && r->norm() > 1e-13; ++it) {
            Eigen::Matrix2d J;
            bool ok = true;
            for (int k = 0; k < 2 && ok; ++k) {
                const double h = 1e-6 * std::max(1.0, std::abs(u(k)));
                Eigen::Vector2d up = u, dn = u;
                up(k) += h;
                dn(k) -= h;
                const auto rp = F(up), rd = F(dn);
                if (!rp || !rd) ok = false; else J.col(k) = (*rp - *rd) / (2.0 * h);
            }
            if (!ok || std::abs(J.determinant()) < 1e-300) break;
            const Eigen::Vector2d step = J.fullPivLu().solve(-*r);
            double damp = 1.0;
            bool improved = false;
            for (int h = 0; h < 40; ++h, damp *= 0.5) {
                const Eigen::Vector2d cand = u + damp * step;
                const auto rc = F(cand);
                if (rc && rc->norm() < r->norm()) {
                    u = cand;
                    r = rc;
                    improved = true;
                    break;
                }
            }
            if (!improved) break;
        }
        if (r->norm() < best_norm) {
            best_norm = r->norm();
            best_res = {(*r)(0), (*r)(1)};
        }
        const Distribution d = build(u);
        const auto res = residuals_of(d, cs);
        if (satisfied(res, cs) && r->norm() < 1e-9) return {d, res, "newton-2d", 0.0, 0.0};
    }
    fail("two-dimensional search did not converge", best_res);
}

std::vector<Eigen::Vector2d> log_grid_starts() {
    std::vector<Eigen::Vector2d> out;
    for (double a : {0.0, 1.0, 2.5, 4.0, -1.0}) {
        for (double b : {0.0, 1.0, 2.5, 4.0, -1.0, -3.0}) out.emplace_back(a, b);
    }
    return out;
}

ElicitationReport elicit_beta(std::span<const Constraint> cs) {
    const Constraint* mean = nullptr;
    const Constraint* mode = nullptr;
    const Constraint* prob = nullptr;
    for (const Constraint& c : cs) {
        if (c.kind == Constraint::Kind::Mean) mean = &c;
        else if (c.kind == Constraint::Kind::Mode) mode = &c;
        else if (!prob) prob = &c;
    }
    if (mean && mode) {
        const double m = mean->a, md = mode->a;
        if (m == md) throw DomainError("elicit: Beta mean equal to mode leaves concentration free");
        const double s = (1.0 - 2.0 * md) / (m - md);
        const double a = m * s, b = (1.0 - m) * s;
        if (!(a > 1.0 && b > 1.0)) fail("mean and mode imply alpha or beta <= 1", {});
        const Distribution d = Distribution::beta(a, b);
        return {d, residuals_of(d, cs), "closed-form"};
    }
    if (mean) {
        const double m = mean->a;
        const Builder build = [m](double a) { return Distribution::beta(a, a * (1.0 - m) / m); };
        return search_1d(build, *prob, cs, kSearchLower, kSearchUpper);
    }
    if (mode) {
        const double md = mode->a;
        const Builder build = [md](double t) {
            const double a = 1.0 + t;
            return Distribution::beta(a, 1.0 + t * (1.0 - md) / md);
        };
        return search_1d(build, *prob, cs, kSearchLower, kSearchUpper);
    }
    const auto build = [](const Eigen::Vector2d& u) {
        return Distribution::beta(std::exp(u(0)), std::exp(u(1)));
    };
    return newton_2d(build, cs, log_grid_starts());
}

ElicitationReport elicit_gamma(std::span<const Constraint> cs) {
    const Constraint* mean = nullptr;
    const Constraint* mode = nullptr;
    const Constraint* prob = nullptr;
    for (const Constraint& c : cs) {
        if (c.kind == Constraint::Kind::Mean) mean = &c;
        else if (c.kind == Constraint::Kind::Mode) mode = &c;
        else if (!prob) prob = &c;
    }
    if (mean && mode) {
        const double m = mean->a, md = mode->a;
        if (!(m > md)) fail("Gamma requires mean > mode", {});
        const double rate = 1.0 / (m - md);
        const Distribution d = Distribution::gamma(m * rate, rate);
        return {d, residuals_of(d, cs), "closed-form"};
    }
    if (mean) {
        const double m = mean->a;
        const Builder build = [m](double a) { return Distribution::gamma(a, a / m); };
        return search_1d(build, *prob, cs, kSearchLower, kSearchUpper);
    }
    if (mode) {
        const double md = mode->a;
        const Builder build = [md](double t) { return Distribution::gamma(1.0 + t, t / md); };
        return search_1d(build, *prob, cs, kSearchLower, kSearchUpper);
    }
    const auto build = [](const Eigen::Vector2d& u) {
        return Distribution::gamma(std::exp(u(0)), std::exp(u(1)));
    };
    std::vector<Eigen::Vector2d> starts;
    // Seed the rate so the bulk sits near the stated quantile values.
    const double scale = std::max(std::abs(cs[0].b), std::abs(cs[1].b));
    for (const auto& s : log_grid_starts()) starts.emplace_back(s(0), s(0) - std::log(scale) + 0.1 * s(1));
    return newton_2d(build, cs, starts);
}

ElicitationReport elicit_normal(std::span<const Constraint> cs) {
    const Constraint* loc = nullptr;
    const Constraint* other = nullptr;
    for (const Constraint& c : cs) {
        if (c.kind == Constraint::Kind::Mean || c.kind == Constraint::Kind::Mode) loc = &c;
        else other = &c;
    }
    if (loc) {
        const double mu = loc->a;
        if (other->kind == Constraint::Kind::Quantile) {
            const double z = special::normal_quantile(other->a);
            const double gap = other->b - mu;
            if (z == 0.0 || gap == 0.0 || (z > 0.0) != (gap > 0.0)) {
                fail("quantile is inconsistent with the stated location", {});
            }
            const double sd = gap / z;
            const Distribution d = Distribution::normal_precision(mu, 1.0 / (sd * sd));
            return {d, residuals_of(d, cs), "closed-form"};
        }
        const Builder build = [mu](double lambda) { return Distribution::normal_precision(mu, lambda); };
        return search_1d(build, *other, cs, 1e-12, 1e12);
    }
    if (cs[0].kind == Constraint::Kind::Quantile && cs[1].kind == Constraint::Kind::Quantile) {
        const double z1 = special::normal_quantile(cs[0].a), z2 = special::normal_quantile(cs[1].a);
        const double sd = (cs[1].b - cs[0].b) / (z2 - z1);
        if (!(sd > 0.0) || !std::isfinite(sd)) fail("quantiles are not increasing in level", {});
        const Distribution d = Distribution::normal_precision(cs[0].b - z1 * sd, 1.0 / (sd * sd));
        return {d, residuals_of(d, cs), "closed-form"};
    }
    const auto build = [](const Eigen::Vector2d& u) {
        return Distribution::normal_precision(u(0), std::exp(u(1)));
    };
    std::vector<Eigen::Vector2d> starts;
    for (const Constraint& c : cs) {
        const double centre = c.kind == Constraint::Kind::Quantile ? c.b : 0.5 * (c.a + c.b);
        const double width = c.kind == Constraint::Kind::Quantile ? std::max(1.0, std::abs(c.b)) : c.b - c.a;
        for (double k : {0.0, -2.0, 2.0, -4.0}) starts.emplace_back(centre, -2.0 * std::log(width) + k);
    }
    return newton_2d(build, cs, starts);
}

}  // namespace

std::string describe(const Constraint& c) {
    std::ostringstream out;
    switch (c.kind) {
        case Constraint::Kind::Mean: out << "mean = " << c.a; break;
        case Constraint::Kind::Mode: out << "mode = " << c.a; break;
        case Constraint::Kind::Quantile: out << "P(X <= " << c.b << ") = " << c.a; break;
        case Constraint::Kind::IntervalMass:
            out << "P(" << c.a << " < X < " << c.b << ") = " << c.c;
            break;
    }
    return out.str();
}

double residual(const Distribution& d, const Constraint& c) {
    switch (c.kind) {
        case Constraint::Kind::Mean: return (mean(d) - c.a) / std::max(std::abs(c.a), 1e-300);
        case Constraint::Kind::Mode: return (mode_of(d) - c.a) / std::max(std::abs(c.a), 1e-300);
        case Constraint::Kind::Quantile: return cdf(d, c.b) - c.a;
        case Constraint::Kind::IntervalMass: return cdf(d, c.b) - cdf(d, c.a) - c.c;
    }
    return 0.0;
}

ElicitationReport elicit_report(Family family, std::span<const Constraint> constraints) {
    validate(family, constraints);
    switch (family) {
        case Family::Beta: return elicit_beta(constraints);
        case Family::Gamma: return elicit_gamma(constraints);
        default: return elicit_normal(constraints);
    }
}

Distribution elicit(Family family, std::span<const Constraint> constraints) {
    return elicit_report(family, constraints).distribution;
}

}  // namespace bayeskit
