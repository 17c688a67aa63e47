#include "bayeskit/cli/run.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <cmath>
#include <filesystem>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "bayeskit/cli/csv.hpp"
#include "bayeskit/cli/errors.hpp"
#include "bayeskit/cli/report.hpp"
#include "bayeskit/cli/spec.hpp"
#include "bayeskit/error.hpp"
#include "bayeskit/jeffreys.hpp"

namespace bayeskit::cli {
namespace {

struct Options {
    std::string command;
    std::string spec_path;
    std::uint64_t seed = 0;
    std::string format = "text";
    int precision = 4;
    bool quiet = false;
    std::string data_path;
    std::string prior_override;
    std::optional<double> mass;
    std::vector<std::string> sets;
};

// Shortest round-trip text for numbers used inside keys.
std::string key_number(double x) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

std::string join(const std::vector<std::string>& items, const std::string& sep = ", ") {
    std::string out;
    for (std::size_t i = 0; i < items.size(); ++i) out += (i ? sep : "") + items[i];
    return out;
}

std::vector<std::string> param_names(Family f) {
    switch (f) {
        case Family::Beta: return {"alpha", "beta"};
        case Family::Gamma: return {"alpha", "beta"};
        case Family::NormalPrecision: return {"mu", "lambda"};
        case Family::Pareto: return {"alpha", "beta"};
        case Family::Poisson: return {"lambda"};
        case Family::Binomial: return {"m", "theta"};
        case Family::Bernoulli: return {"theta"};
        case Family::Geometric: return {"theta"};
        case Family::ContinuousUniform: return {"upper"};
        case Family::PoissonGamma: return {"alpha", "beta", "n"};
        case Family::NormalGamma: return {"mu", "n0", "alpha", "beta"};
    }
    return {};
}

void add_distribution(Report& r, const std::string& section, const Distribution& d, bool moments = true) {
    r.add(section, "distribution", describe(d));
    const auto names = param_names(d.family());
    for (std::size_t i = 0; i < names.size(); ++i) r.add(section, names[i], d.param(i));
    if (!moments) return;
    try {
        const Moments m = bayeskit::moments(d);
        r.add(section, "mean", m.mean);
        r.add(section, "variance", m.variance);
    } catch (const MomentError&) {
        r.notes.push_back(section + " moments do not exist");
    }
}

SamplingModel sampling_model(Likelihood l, double known) {
    switch (l) {
        case Likelihood::Bernoulli: return {ModelFamily::Bernoulli};
        case Likelihood::Poisson: return {ModelFamily::Poisson};
        case Likelihood::Geometric: return {ModelFamily::Geometric};
        case Likelihood::Exponential: return {ModelFamily::Exponential};
        case Likelihood::ContinuousUniform: return {ModelFamily::ContinuousUniform};
        case Likelihood::NormalKnownPrecision: return {ModelFamily::NormalKnownPrecision, 1, known};
        case Likelihood::NormalKnownMean: return {ModelFamily::NormalKnownMean, 1, known};
        case Likelihood::NormalBoth: break;
    }
    throw DomainError("no one-parameter Jeffreys prior for the normal model with unknown mean and precision");
}

// Resolved model: either a proper conjugate prior or a Jeffreys prior.
struct ResolvedModel {
    Likelihood likelihood;
    double known;
    std::optional<Distribution> prior;
    std::optional<SamplingModel> jeffreys;
    std::optional<ElicitationReport> elicitation;
    SampleSummary data;
    bool has_data = false;
    std::string data_source;

    ConjugateModel conjugate() const {
        if (!prior) throw DomainError("operation needs a proper prior; the Jeffreys prior is improper here");
        return ConjugateModel(likelihood, *prior, known);
    }
    Distribution posterior() const {
        if (jeffreys) return jeffreys_posterior(*jeffreys, data);
        return bayeskit::posterior(conjugate(), data);
    }
};

ResolvedModel resolve(const ModelSpec& spec, const Options& opt) {
    ResolvedModel m{spec.likelihood, spec.known, std::nullopt, std::nullopt, std::nullopt, {}, false, {}};
    const bool jeffreys = opt.prior_override == "jeffreys" || spec.prior.kind == PriorSpec::Kind::Jeffreys;
    if (jeffreys) {
        const SamplingModel sm = sampling_model(spec.likelihood, spec.known);
        const ImproperDensity d = jeffreys_prior(sm);
        m.jeffreys = sm;
        if (d.proper && d.normalized) m.prior = *d.normalized;
    } else if (spec.prior.kind == PriorSpec::Kind::Elicited) {
        m.elicitation = elicit_report(spec.prior.family, spec.prior.constraints);
        m.prior = m.elicitation->distribution;
    } else {
        m.prior = *spec.prior.distribution;
    }
    if (m.prior && m.prior->family() != conjugate_family(spec.likelihood)) {
        throw DomainError("prior family " + std::string(family_name(m.prior->family())) +
                          " is not conjugate to the " + std::string(likelihood_name(spec.likelihood)) +
                          " likelihood");
    }
    std::vector<double> values;
    if (!opt.data_path.empty()) {
        values = read_single_column(opt.data_path);
        m.has_data = true;
        m.data_source = std::filesystem::path(opt.data_path).filename().string();
    } else if (spec.data.present) {
        m.has_data = true;
        m.data_source = spec.data.source;
        if (spec.data.summary) m.data = *spec.data.summary;
        else values = spec.data.values;
    }
    const bool raw = !opt.data_path.empty() || (spec.data.present && !spec.data.summary);
    if (raw) {
        validate_data(spec.likelihood, values);
        m.data = SampleSummary::from_data(values);
    }
    return m;
}

void add_prior(Report& r, const ModelSpec& spec, const ResolvedModel& m) {
    r.add("model", "likelihood", std::string(likelihood_name(spec.likelihood)));
    if (!std::isnan(spec.known)) r.add("model", "known", spec.known);
    if (m.jeffreys) {
        const ImproperDensity d = jeffreys_prior(*m.jeffreys);
        r.add("prior", "jeffreys", d.family);
        r.add("prior", "proper", std::string(d.proper ? "yes" : "no"));
        if (m.prior) add_distribution(r, "prior", *m.prior, false);
    } else {
        add_distribution(r, "prior", *m.prior);
    }
}

void add_data(Report& r, const ResolvedModel& m) {
    if (!m.has_data) return;
    r.add("data", "source", m.data_source);
    r.add("data", "n", static_cast<double>(m.data.n));
    r.add("data", "sum", m.data.sum);
    if (m.data.n > 0 && !std::isnan(m.data.sum)) r.add("data", "mean", m.data.sum / static_cast<double>(m.data.n));
}

Distribution target_distribution(const std::string& target, const ResolvedModel& m) {
    if (target == "prior") {
        if (!m.prior) throw DomainError("the Jeffreys prior for this model is improper");
        return *m.prior;
    }
    if (target == "posterior") return m.posterior();
    const Predictive p = target == "prior_predictive" ? prior_predictive(m.conjugate())
                                                       : posterior_predictive(m.conjugate(), m.data);
    if (!p.has_closed_form()) throw DomainError("the " + target + " law has no closed form for this model");
    return p.distribution();
}

// ---- model subcommands ----

Report run_elicit(const ModelSpec& spec, const Options& opt) {
    if (spec.prior.kind != PriorSpec::Kind::Elicited) throw InputError("elicit needs a prior with 'elicit' constraints");
    ResolvedModel m = resolve(spec, opt);
    Report r;
    const ElicitationReport& e = *m.elicitation;
    add_distribution(r, "prior", e.distribution);
    r.add("elicitation", "method", e.method);
    if (e.method == "bracketed-1d") {
        r.add("elicitation", "search_lower", e.search_lower);
        r.add("elicitation", "search_upper", e.search_upper);
    }
    for (std::size_t i = 0; i < spec.prior.constraints.size(); ++i) {
        r.add("residuals", describe(spec.prior.constraints[i]), e.residuals[i]);
    }
    return r;
}

Report run_update(const ModelSpec& spec, const Options& opt) {
    ResolvedModel m = resolve(spec, opt);
    Report r;
    add_prior(r, spec, m);
    add_data(r, m);
    add_distribution(r, "posterior", m.posterior());
    return r;
}

void add_predictive(Report& r, const std::string& section, const Predictive& p, const ModelSpec& spec,
                    const Options& opt) {
    if (p.has_closed_form()) {
        add_distribution(r, section, p.distribution());
    } else {
        r.add(section, "distribution", std::string("numeric"));
    }
    for (double x : spec.predict_points) r.add(section, "p(" + key_number(x) + ")", p.density(x));
    if (spec.simulate > 0) {
        if (!p.has_closed_form()) {
            r.notes.push_back(section + ": simulation needs a closed-form law");
            return;
        }
        const auto draws = sample(p.distribution(), spec.simulate, opt.seed);
        const double n = static_cast<double>(draws.size());
        const double mean = std::accumulate(draws.begin(), draws.end(), 0.0) / n;
        double ss = 0.0;
        for (double x : draws) ss += (x - mean) * (x - mean);
        r.add(section, "simulated_draws", n);
        r.add(section, "simulated_mean", mean);
        r.add(section, "simulated_sd", draws.size() > 1 ? std::sqrt(ss / (n - 1)) : 0.0);
    }
}

Report run_predict(const ModelSpec& spec, const Options& opt) {
    ResolvedModel m = resolve(spec, opt);
    Report r;
    add_prior(r, spec, m);
    add_data(r, m);
    const ConjugateModel cm = m.conjugate();
    add_predictive(r, "prior_predictive", prior_predictive(cm), spec, opt);
    if (m.has_data) add_predictive(r, "posterior_predictive", posterior_predictive(cm, m.data), spec, opt);
    return r;
}

Report run_estimate(const ModelSpec& spec, const Options& opt) {
    ResolvedModel m = resolve(spec, opt);
    Report r;
    const Distribution post = m.posterior();
    r.add("posterior", "distribution", describe(post));
    for (EstimationUtility u : spec.estimates) {
        const char* name = u == EstimationUtility::Quadratic  ? "quadratic"
                           : u == EstimationUtility::Absolute ? "absolute"
                                                              : "relative_quadratic";
        r.add("estimate", name, point_estimate(post, u));
    }
    return r;
}

std::string interval_text(const Interval& iv, int precision) {
    return "[" + format_number(iv.lower, precision) + ", " + format_number(iv.upper, precision) + "]";
}

Report run_hpd(const ModelSpec& spec, const Options& opt) {
    ResolvedModel m = resolve(spec, opt);
    const double mass = opt.mass.value_or(spec.hpd_mass);
    if (!(mass > 0.0 && mass < 1.0)) throw InputError("--mass must lie in (0, 1)");
    const Distribution d = target_distribution(spec.hpd_target, m);
    Report r;
    r.add(spec.hpd_target, "distribution", describe(d));
    r.add("hpd", "mass", mass);
    const auto region = hpd_region(d, mass);
    std::string text;
    double covered = 0.0;
    for (std::size_t i = 0; i < region.size(); ++i) {
        text += (i ? " U " : "") + interval_text(region[i], opt.precision);
        covered += cdf(d, region[i].upper) - cdf(d, region[i].lower);
    }
    r.add("hpd", "interval", text);
    for (std::size_t i = 0; i < region.size(); ++i) {
        const std::string suffix = region.size() > 1 ? "_" + std::to_string(i + 1) : "";
        r.add("hpd", "lower" + suffix, region[i].lower);
        r.add("hpd", "upper" + suffix, region[i].upper);
    }
    r.add("hpd", "coverage", covered);
    const Interval et = equal_tailed_interval(d, mass);
    r.add("equal_tailed", "interval", interval_text(et, opt.precision));
    r.add("equal_tailed", "lower", et.lower);
    r.add("equal_tailed", "upper", et.upper);
    return r;
}

Report run_test(const ModelSpec& spec, const Options& opt) {
    if (!spec.test) throw InputError("the spec has no 'test' block");
    ResolvedModel m = resolve(spec, opt);
    const TestSpec& t = *spec.test;
    const Distribution d = target_distribution(t.target, m);
    Report r;
    r.add(t.target, "distribution", describe(d));
    const ContrastReport c = contrast(d, t.partition, t.utilities, t.actions);
    for (std::size_t j = 0; j < c.probabilities.size(); ++j) {
        r.add("hypotheses", c.probabilities.labels()[j], c.probabilities[j]);
    }
    for (std::size_t i = 0; i < c.actions.size(); ++i) {
        r.add("expected_utility", c.actions[i], c.expected_utilities(static_cast<Eigen::Index>(i)));
    }
    r.add("decision", "optimal", join(c.chosen));
    return r;
}

// ---- discrete problems ----

Report run_grid(const GridSpec& spec, const Options& opt, bool predict_only) {
    const GridPrior prior(spec.support, spec.weights);
    std::vector<double> data = spec.data.values;
    if (!opt.data_path.empty()) data = read_single_column(opt.data_path);
    Report r;
    if (spec.data.summary) throw InputError("grid models need raw observations, not a summary");
    const GridPrior post = grid_posterior(prior, spec.likelihood, data);
    r.add("data", "n", static_cast<double>(data.size()));
    if (!predict_only) {
        for (std::size_t i = 0; i < prior.support.size(); ++i) r.add("prior", "theta=" + key_number(prior.support[i]), prior.weights[i]);
        for (std::size_t i = 0; i < post.support.size(); ++i) r.add("posterior", "theta=" + key_number(post.support[i]), post.weights[i]);
    }
    if (spec.likelihood.family == GridFamily::Bernoulli || spec.likelihood.family == GridFamily::Binomial) {
        const ProbVector pred = grid_predictive(post, spec.likelihood);
        for (std::size_t k = 0; k < pred.size(); ++k) r.add("predictive", "p(" + pred.labels()[k] + ")", pred[k]);
        if (spec.likelihood.family == GridFamily::Bernoulli) {
            const double ratio = fair_bet_ratio(pred);
            r.add("bet", "fair_ratio", ratio);
            if (spec.stake) {
                r.add("bet", "stake_on_1", *spec.stake);
                r.add("bet", "fair_stake_on_0", ratio * *spec.stake);
            }
        }
    }
    return r;
}

Report run_event(const EventSpec& spec) {
    Report r;
    r.add("evidence", "p_given_event", spec.p_given_event);
    r.add("evidence", "p_given_complement", spec.p_given_complement);
    for (double p : spec.priors) {
        r.add("posterior", "prior=" + key_number(p), event_posterior(p, spec.p_given_event, spec.p_given_complement));
    }
    return r;
}

void add_problem(Report& r, const DecisionProblem& p, const std::string& section) {
    const Eigen::VectorXd eu = expected_utilities(p);
    for (std::size_t i = 0; i < p.actions().size(); ++i) r.add(section, p.actions()[i], eu(static_cast<Eigen::Index>(i)));
}

Report run_decision(const DecisionProblem& p) {
    Report r;
    add_problem(r, p, "expected_utility");
    r.add("decision", "optimal", join(optimal_actions(p)));
    r.add("decision", "admissible", join(admissible_actions(p)));
    if (!p.per_action()) r.add("decision", "evpi", evpi(p));
    return r;
}

Report run_portfolio(const PortfolioSpec& spec) {
    Report r;
    for (double A : spec.risk_aversion) {
        const std::string s = "A=" + key_number(A);
        const DecisionProblem p = portfolio_problem(spec.fractions, spec.returns, spec.probs, spec.rate, A);
        const Eigen::VectorXd eu = expected_utilities(p);
        for (std::size_t i = 0; i < spec.fractions.size(); ++i) {
            r.add(s, "expected_utility a=" + key_number(spec.fractions[i]), eu(static_cast<Eigen::Index>(i)));
        }
        std::vector<std::string> best;
        for (const auto& a : optimal_actions(p)) best.push_back("a=" + key_number(spec.fractions[p.action_index(a)]));
        r.add(s, "optimal", join(best));
        std::vector<std::string> kept;
        for (const auto& a : admissible_actions(p)) kept.push_back("a=" + key_number(spec.fractions[p.action_index(a)]));
        r.add(s, "admissible", join(kept));
        if (A > 0.0) {
            const PortfolioOptimum o = optimal_portfolio_weight(spec.returns, spec.probs, spec.rate, A);
            r.add(s, "a*", o.weight);
            r.add(s, "value", o.value);
            r.add(s, "rho", o.rho);
            r.add(s, "delta", o.delta);
        }
    }
    return r;
}

Report run_voi(const VoiSpec& spec) {
    const DecisionProblem& p = spec.problem;
    const Experiment& e = spec.experiment;
    Report r;
    add_problem(r, p, "prior");
    r.add("prior", "optimal", join(optimal_actions(p)));
    const double v_perfect = evpi(p);
    r.add("prior", "evpi", v_perfect);
    const Eigen::VectorXd marg = outcome_marginals(p, e);
    const ProbVector prior = p.shared_probs();
    double mean_cost = 0.0;
    for (std::size_t i = 0; i < e.outcomes.size(); ++i) {
        const auto ii = static_cast<Eigen::Index>(i);
        const std::string s = "outcome " + e.outcomes[i];
        r.add(s, "marginal", marg(ii));
        if (marg(ii) > 0.0) {
            const ChanceUpdate u = chance_update(prior, e.likelihood.row(ii).transpose());
            for (std::size_t j = 0; j < p.states().size(); ++j) r.add(s, "posterior " + p.states()[j], u.posterior[j]);
            r.add(s, "optimal", join(optimal_actions(p.with_probs(u.posterior))));
            r.add(s, "value_of_data", value_of_data(p, e, i));
        }
        mean_cost += marg(ii) * e.cost(ii);
    }
    const double v = value_of_experiment(p, e);
    r.add("experiment", "value", v);
    r.add("experiment", "expected_cost", mean_cost);
    r.add("experiment", "bound", v_perfect - mean_cost);
    r.add("experiment", "within_bound", std::string(v <= v_perfect - mean_cost + 1e-12 ? "yes" : "no"));
    return r;
}

Report run_tree(TreeSpec spec, const Options& opt) {
    for (const std::string& kv : opt.sets) {
        const auto eq = kv.find('=');
        double v = 0.0;
        if (eq == std::string::npos || !parse_double(kv.substr(eq + 1), v)) throw InputError("--set expects name=value, got '" + kv + "'");
        const std::string name = kv.substr(0, eq);
        if (!spec.parameters.count(name)) throw InputError("--set names unknown parameter '" + name + "'");
        spec.parameters[name] = v;
    }
    const PolicyValue pv = solve_tree(build_tree(spec));
    Report r;
    for (const auto& [k, v] : spec.parameters) r.add("parameters", k, v);
    if (!pv.policy.empty()) {
        r.add("tree", "optimal", join(pv.policy.front().chosen) + "; value " + format_number(pv.value, opt.precision));
    }
    r.add("tree", "value", pv.value);
    for (const PolicyChoice& c : pv.policy) {
        r.add("policy", c.node, join(c.chosen) + "; value " + format_number(c.value, opt.precision));
    }
    return r;
}

Report run_score(const ScoringSpec& spec) {
    Report r;
    r.add("rule", "name", spec.rule_name);
    r.add("rule", "A", spec.rule.A);
    double total = 0.0;
    for (const auto& resp : spec.responses) {
        const double s = score(spec.rule, resp.q, resp.correct);
        total += s;
        r.add("scores", resp.id, s);
    }
    r.add("summary", "responses", static_cast<double>(spec.responses.size()));
    r.add("summary", "total", total);
    if (!spec.responses.empty()) r.add("summary", "mean", total / static_cast<double>(spec.responses.size()));
    return r;
}

Report run_discrepancy(const DiscrepancySpec& spec) {
    Report r;
    if (const auto* d = std::get_if<DiscrepancySpec::Discrete>(&spec.body)) {
        r.add("discrepancy", "p_from_q", log_discrepancy(d->p, d->q));
        r.add("discrepancy", "q_from_p", log_discrepancy(d->q, d->p));
        r.add("discrepancy", "symmetric", symmetric_discrepancy(d->p, d->q));
    } else if (const auto* b = std::get_if<DiscrepancySpec::BinomialPoisson>(&spec.body)) {
        for (int n : b->n) {
            for (double t : b->theta) {
                r.add("binomial_poisson", "n=" + std::to_string(n) + " theta=" + key_number(t),
                      binomial_poisson_discrepancy(n, t));
            }
        }
    } else {
        const auto& na = std::get<DiscrepancySpec::NormalApprox>(spec.body);
        for (const Distribution& t : na.targets) {
            const std::string s = describe(t);
            const Distribution n = best_normal_approx(t);
            r.add(s, "normal", describe(n));
            r.add(s, "discrepancy", log_discrepancy(t, n));
        }
    }
    return r;
}

Report run_info(const InfoSpec& spec) {
    Report r;
    if (spec.posterior) {
        r.add("information", "data", info_of_data(spec.prior, *spec.posterior));
        return r;
    }
    Eigen::VectorXd m(static_cast<Eigen::Index>(spec.outcomes.size()));
    std::vector<std::string> labels;
    std::vector<ProbVector> posts;
    for (std::size_t i = 0; i < spec.outcomes.size(); ++i) {
        const auto& o = spec.outcomes[i];
        m(static_cast<Eigen::Index>(i)) = o.marginal;
        labels.push_back(o.label);
        posts.push_back(o.posterior);
        r.add("outcomes", o.label, info_of_data(spec.prior, o.posterior));
    }
    r.add("information", "expected", expected_info_of_experiment(spec.prior, ProbVector(labels, m), posts));
    return r;
}

// ---- dispatch ----

const std::map<std::string, std::set<std::string>> kAccepts = {
    {"elicit", {"model"}},       {"update", {"model", "grid", "event"}}, {"predict", {"model", "grid"}},
    {"estimate", {"model"}},     {"hpd", {"model"}},                     {"test", {"model"}},
    {"decide", {"decision", "portfolio"}}, {"tree", {"tree"}},           {"voi", {"voi"}},
    {"score", {"scoring"}},      {"discrepancy", {"discrepancy"}},       {"info", {"info"}},
};

Report dispatch(const AnalysisSpec& spec, const Options& opt) {
    const auto& accepted = kAccepts.at(opt.command);
    if (!accepted.count(spec.kind)) {
        throw InputError("'" + opt.command + "' does not accept the spec kind '" + spec.kind + "' (expected " +
                         join({accepted.begin(), accepted.end()}, " or ") + ")");
    }
    if (const auto* m = std::get_if<ModelSpec>(&spec.body)) {
        if (opt.command == "elicit") return run_elicit(*m, opt);
        if (opt.command == "update") return run_update(*m, opt);
        if (opt.command == "predict") return run_predict(*m, opt);
        if (opt.command == "estimate") return run_estimate(*m, opt);
        if (opt.command == "hpd") return run_hpd(*m, opt);
        return run_test(*m, opt);
    }
    if (const auto* g = std::get_if<GridSpec>(&spec.body)) return run_grid(*g, opt, opt.command == "predict");
    if (const auto* e = std::get_if<EventSpec>(&spec.body)) return run_event(*e);
    if (const auto* d = std::get_if<DecisionSpec>(&spec.body)) return run_decision(d->problem);
    if (const auto* p = std::get_if<PortfolioSpec>(&spec.body)) return run_portfolio(*p);
    if (const auto* v = std::get_if<VoiSpec>(&spec.body)) return run_voi(*v);
    if (const auto* t = std::get_if<TreeSpec>(&spec.body)) return run_tree(*t, opt);
    if (const auto* s = std::get_if<ScoringSpec>(&spec.body)) return run_score(*s);
    if (const auto* d = std::get_if<DiscrepancySpec>(&spec.body)) return run_discrepancy(*d);
    return run_info(std::get<InfoSpec>(spec.body));
}

Format parse_format(const std::string& s) {
    if (s == "csv") return Format::Csv;
    if (s == "json") return Format::Json;
    return Format::Text;
}

}  // namespace

Outcome main_with_args(const std::vector<std::string>& args) {
    Options opt;
    CLI::App app{"Bayesian inference and decision analysis from declarative spec files", "bayeskit"};
    app.require_subcommand(1);
    app.add_option("--seed", opt.seed, "Seed for simulation output")->capture_default_str();
    app.add_option("--format", opt.format, "Output format")
        ->check(CLI::IsMember({"text", "csv", "json"}))
        ->capture_default_str();
    app.add_option("--precision", opt.precision, "Decimals in printed numbers")
        ->check(CLI::Range(0, 17))
        ->capture_default_str();
    app.add_flag("--quiet", opt.quiet, "Omit headers and notes");

    const std::vector<std::pair<std::string, std::string>> commands = {
        {"elicit", "Fit a prior to elicited constraints"},
        {"update", "Posterior from prior and data"},
        {"predict", "Prior and posterior predictive laws"},
        {"estimate", "Point estimates under estimation utilities"},
        {"hpd", "Highest-density region"},
        {"test", "Hypothesis contrast as a decision"},
        {"decide", "Expected-utility decision"},
        {"tree", "Solve a sequential decision tree"},
        {"voi", "Value of information of an experiment"},
        {"score", "Score reported probabilities"},
        {"discrepancy", "Logarithmic discrepancies"},
        {"info", "Information carried by data"},
    };
    for (const auto& [name, help] : commands) {
        CLI::App* sub = app.add_subcommand(name, help);
        sub->fallthrough();
        sub->add_option("spec", opt.spec_path, "Spec file")->required();
        sub->callback([&opt, n = name] { opt.command = n; });
        if (name == "elicit" || name == "update" || name == "predict" || name == "estimate" || name == "hpd" ||
            name == "test") {
            sub->add_option("--data", opt.data_path, "Single-column CSV replacing the spec's data");
            sub->add_option("--prior", opt.prior_override, "Prior override")->check(CLI::IsMember({"jeffreys"}));
        }
        if (name == "hpd") sub->add_option("--mass", opt.mass, "Probability mass of the region");
        if (name == "tree") sub->add_option("--set", opt.sets, "Override a tree parameter (name=value)");
    }

    Outcome out;
    std::ostringstream cout, cerr;
    try {
        std::vector<std::string> rev(args.rbegin(), args.rend());
        app.parse(rev);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, cout, cerr);
        out.exit_code = code == 0 ? kExitOk : kExitInput;
        out.stdout_text = cout.str();
        out.stderr_text = cerr.str();
        return out;
    }

    try {
        const AnalysisSpec spec = parse_spec(opt.spec_path);
        Report report = dispatch(spec, opt);
        report.command = opt.command;
        report.title = spec.title;
        out.stdout_text = render(report, parse_format(opt.format), opt.precision, opt.quiet);
        out.exit_code = kExitOk;
    } catch (const SpecError& e) {
        for (const std::string& msg : e.errors()) out.stderr_text += "error: " + msg + "\n";
        out.exit_code = kExitInput;
    } catch (const InputError& e) {
        out.stderr_text = std::string("error: ") + e.what() + "\n";
        out.exit_code = kExitInput;
    } catch (const Error& e) {
        out.stderr_text = "error [" + opt.command + "]: " + e.what() + "\n";
        out.exit_code = kExitNumeric;
    }
    return out;
}

}  // namespace bayeskit::cli
