#include "bayeskit/cli/spec.hpp"

#include <cmath>
#include <filesystem>
#include <set>
#include <sstream>

#include "bayeskit/cli/csv.hpp"
#include "bayeskit/cli/errors.hpp"
#include "bayeskit/error.hpp"
#include "json.hpp"

namespace bayeskit::cli {

SpecError::SpecError(std::vector<std::string> errors)
    : std::runtime_error([&] {
          std::string msg = "invalid spec";
          for (const auto& e : errors) msg += "\n  " + e;
          return msg;
      }()),
      errors_(std::move(errors)) {}

namespace {

using json = nlohmann::json;
constexpr double kInf = std::numeric_limits<double>::infinity();

const std::set<std::string> kKinds = {"model",     "grid", "event",   "decision",    "portfolio",
                                      "voi",       "tree", "scoring", "discrepancy", "info"};

class Parser {
public:
    explicit Parser(std::string base_dir) : base_dir_(std::move(base_dir)) {}

    std::vector<std::string> errors;

    void error(const std::string& path, const std::string& msg) { errors.push_back(path + ": " + msg); }

    static std::string at(const std::string& path, const std::string& key) { return path + "/" + key; }
    static std::string at(const std::string& path, std::size_t i) { return path + "/" + std::to_string(i); }

    bool object(const json& j, const std::string& path) {
        if (j.is_object()) return true;
        error(path, "expected an object");
        return false;
    }

    void allowed(const json& obj, const std::set<std::string>& keys, const std::string& path) {
        for (auto it = obj.begin(); it != obj.end(); ++it) {
            if (!keys.count(it.key())) error(at(path, it.key()), "unknown field");
        }
    }

    const json* member(const json& obj, const std::string& key, const std::string& path, bool required) {
        if (obj.is_object() && obj.contains(key)) return &obj.at(key);
        if (required) error(at(path, key), "required field is missing");
        return nullptr;
    }

    std::optional<double> as_number(const json& j, const std::string& path) {
        if (j.is_number()) return j.get<double>();
        error(path, "expected a number");
        return std::nullopt;
    }

    std::optional<double> number(const json& obj, const std::string& key, const std::string& path,
                                 bool required = true) {
        const json* j = member(obj, key, path, required);
        return j ? as_number(*j, at(path, key)) : std::nullopt;
    }

    std::optional<std::string> string(const json& obj, const std::string& key, const std::string& path,
                                      bool required = true) {
        const json* j = member(obj, key, path, required);
        if (!j) return std::nullopt;
        if (j->is_string()) return j->get<std::string>();
        error(at(path, key), "expected a string");
        return std::nullopt;
    }

    std::optional<std::vector<double>> numbers_of(const json& j, const std::string& path) {
        if (!j.is_array()) {
            error(path, "expected an array of numbers");
            return std::nullopt;
        }
        std::vector<double> out;
        bool ok = true;
        for (std::size_t i = 0; i < j.size(); ++i) {
            if (auto v = as_number(j[i], at(path, i))) out.push_back(*v); else ok = false;
        }
        if (!ok) return std::nullopt;
        return out;
    }

    std::optional<std::vector<double>> numbers(const json& obj, const std::string& key,
                                               const std::string& path, bool required = true) {
        const json* j = member(obj, key, path, required);
        return j ? numbers_of(*j, at(path, key)) : std::nullopt;
    }

    std::optional<std::vector<std::string>> strings(const json& obj, const std::string& key,
                                                    const std::string& path, bool required = true) {
        const json* j = member(obj, key, path, required);
        if (!j) return std::nullopt;
        if (!j->is_array()) {
            error(at(path, key), "expected an array of strings");
            return std::nullopt;
        }
        std::vector<std::string> out;
        bool ok = true;
        for (std::size_t i = 0; i < j->size(); ++i) {
            if ((*j)[i].is_string()) out.push_back((*j)[i].get<std::string>());
            else {
                error(at(at(path, key), i), "expected a string");
                ok = false;
            }
        }
        if (!ok) return std::nullopt;
        if (std::set<std::string>(out.begin(), out.end()).size() != out.size()) {
            error(at(path, key), "labels must be distinct");
            return std::nullopt;
        }
        return out;
    }

    // Matrix with `cols` entries per row; `what` names the column dimension in messages.
    std::optional<Eigen::MatrixXd> matrix(const json& obj, const std::string& key, const std::string& path,
                                          std::size_t rows, std::size_t cols, const char* row_what,
                                          const char* col_what) {
        const json* j = member(obj, key, path, true);
        if (!j) return std::nullopt;
        const std::string p = at(path, key);
        if (!j->is_array()) {
            error(p, "expected an array of rows");
            return std::nullopt;
        }
        if (j->size() != rows) {
            error(p, "has " + std::to_string(j->size()) + " rows, expected " + std::to_string(rows) +
                         " (one per " + row_what + ")");
            return std::nullopt;
        }
        Eigen::MatrixXd m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
        bool ok = true;
        for (std::size_t r = 0; r < rows; ++r) {
            auto row = numbers_of((*j)[r], at(p, r));
            if (!row) {
                ok = false;
                continue;
            }
            if (row->size() != cols) {
                error(at(p, r), "row " + std::to_string(r + 1) + " has " + std::to_string(row->size()) +
                                    " entries, expected " + std::to_string(cols) + " (one per " + col_what + ")");
                ok = false;
                continue;
            }
            for (std::size_t c = 0; c < cols; ++c) {
                m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = (*row)[c];
            }
        }
        if (!ok) return std::nullopt;
        return m;
    }

    std::optional<ProbVector> probs(const std::vector<double>& w, std::vector<std::string> labels,
                                    const std::string& path) {
        try {
            Eigen::VectorXd v = Eigen::Map<const Eigen::VectorXd>(w.data(), static_cast<Eigen::Index>(w.size()));
            if (labels.empty()) labels = default_labels(w.size());
            return ProbVector(std::move(labels), std::move(v));
        } catch (const Error& e) {
            error(path, e.what());
            return std::nullopt;
        }
    }

    std::optional<Distribution> distribution(const json& j, const std::string& path) {
        if (!object(j, path)) return std::nullopt;
        allowed(j, {"family", "params"}, path);
        const auto fam = string(j, "family", path);
        const auto params = numbers(j, "params", path);
        if (!fam || !params) return std::nullopt;
        const auto f = parse_family(*fam);
        if (!f) {
            error(at(path, "family"), "unknown distribution family '" + *fam + "'");
            return std::nullopt;
        }
        try {
            return Distribution::make(*f, *params);
        } catch (const Error& e) {
            error(at(path, "params"), e.what());
            return std::nullopt;
        }
    }

    DataSpec data(const json& root, const std::string& path) {
        DataSpec out;
        const json* j = member(root, "data", "", false);
        if (!j) return out;
        if (!object(*j, path)) return out;
        allowed(*j, {"values", "csv", "summary"}, path);
        const int given = static_cast<int>(j->contains("values")) + static_cast<int>(j->contains("csv")) +
                          static_cast<int>(j->contains("summary"));
        if (given != 1) {
            error(path, "exactly one of 'values', 'csv' or 'summary' is required");
            return out;
        }
        out.present = true;
        if (auto v = numbers(*j, "values", path, false)) {
            out.values = *v;
            out.source = "inline";
        } else if (auto csv = string(*j, "csv", path, false)) {
            out.source = *csv;
            const std::filesystem::path file = std::filesystem::path(base_dir_) / *csv;
            try {
                out.values = read_single_column(file.string());
            } catch (const InputError& e) {
                error(at(path, "csv"), e.what());
            }
        } else if (const json* s = member(*j, "summary", path, false)) {
            const std::string sp = at(path, "summary");
            if (!object(*s, sp)) return out;
            allowed(*s, {"n", "sum", "r", "sum_sq", "max"}, sp);
            out.source = "summary";
            const auto n = number(*s, "n", sp);
            if (!n) return out;
            if (*n < 0 || std::floor(*n) != *n) {
                error(at(sp, "n"), "must be a nonnegative integer");
                return out;
            }
            SampleSummary sum;
            sum.n = static_cast<std::size_t>(*n);
            if (s->contains("r")) {
                const auto r = number(*s, "r", sp);
                if (!r) return out;
                if (*r < 0 || *r > *n || std::floor(*r) != *r) {
                    error(at(sp, "r"), "must be an integer between 0 and n");
                    return out;
                }
                sum = SampleSummary::binary(sum.n, static_cast<std::size_t>(*r));
            } else {
                sum.sum = number(*s, "sum", sp).value_or(0.0);
                sum.sum_sq = number(*s, "sum_sq", sp, false).value_or(std::nan(""));
                sum.max = number(*s, "max", sp, false).value_or(std::nan(""));
            }
            out.summary = sum;
        }
        return out;
    }

    std::optional<Constraint> constraint(const json& j, const std::string& path) {
        if (!object(j, path)) return std::nullopt;
        if (j.size() != 1) {
            error(path, "a constraint has exactly one of 'mean', 'mode', 'quantile' or 'interval'");
            return std::nullopt;
        }
        const std::string key = j.begin().key();
        if (key == "mean" || key == "mode") {
            const auto v = number(j, key, path);
            if (!v) return std::nullopt;
            return key == "mean" ? Constraint::mean(*v) : Constraint::mode(*v);
        }
        if (key == "quantile") {
            const std::string p = at(path, key);
            if (!object(j[key], p)) return std::nullopt;
            allowed(j[key], {"level", "value"}, p);
            const auto level = number(j[key], "level", p);
            const auto value = number(j[key], "value", p);
            if (!level || !value) return std::nullopt;
            return Constraint::quantile(*level, *value);
        }
        if (key == "interval") {
            const std::string p = at(path, key);
            if (!object(j[key], p)) return std::nullopt;
            allowed(j[key], {"lower", "upper", "mass"}, p);
            const auto lo = number(j[key], "lower", p);
            const auto hi = number(j[key], "upper", p);
            const auto mass = number(j[key], "mass", p);
            if (!lo || !hi || !mass) return std::nullopt;
            return Constraint::interval_mass(*lo, *hi, *mass);
        }
        error(at(path, key), "unknown constraint kind");
        return std::nullopt;
    }

    PriorSpec prior(const json& j, const std::string& path) {
        PriorSpec out;
        if (j.is_string()) {
            if (j.get<std::string>() == "jeffreys") out.kind = PriorSpec::Kind::Jeffreys;
            else error(path, "expected \"jeffreys\" or a prior object");
            return out;
        }
        if (!object(j, path)) return out;
        if (j.contains("elicit")) {
            allowed(j, {"family", "elicit"}, path);
            out.kind = PriorSpec::Kind::Elicited;
            if (auto fam = string(j, "family", path)) {
                if (auto f = parse_family(*fam)) out.family = *f;
                else error(at(path, "family"), "unknown distribution family '" + *fam + "'");
            }
            const json& list = j["elicit"];
            const std::string lp = at(path, "elicit");
            if (!list.is_array()) {
                error(lp, "expected an array of constraints");
                return out;
            }
            for (std::size_t i = 0; i < list.size(); ++i) {
                if (auto c = constraint(list[i], at(lp, i))) out.constraints.push_back(*c);
            }
            return out;
        }
        out.distribution = distribution(j, path);
        return out;
    }

    std::optional<Interval> bound_pair(const json& j, const std::string& path) {
        if (!j.is_array() || j.size() != 2) {
            error(path, "expected [lower, upper] (null for an open end)");
            return std::nullopt;
        }
        Interval r{-kInf, kInf};
        if (!j[0].is_null()) {
            if (auto v = as_number(j[0], at(path, 0))) r.lower = *v; else return std::nullopt;
        }
        if (!j[1].is_null()) {
            if (auto v = as_number(j[1], at(path, 1))) r.upper = *v; else return std::nullopt;
        }
        if (r.lower > r.upper) {
            error(path, "lower bound exceeds upper bound");
            return std::nullopt;
        }
        return r;
    }

    std::optional<TestSpec> test(const json& j, const std::string& path) {
        if (!object(j, path)) return std::nullopt;
        allowed(j, {"target", "hypotheses", "actions", "utilities"}, path);
        TestSpec out;
        if (auto t = string(j, "target", path, false)) {
            static const std::set<std::string> targets = {"prior", "posterior", "prior_predictive",
                                                          "posterior_predictive"};
            if (!targets.count(*t)) error(at(path, "target"), "unknown target '" + *t + "'");
            out.target = *t;
        }
        const json* hs = member(j, "hypotheses", path, true);
        if (!hs) return std::nullopt;
        const std::string hp = at(path, "hypotheses");
        if (!hs->is_array() || hs->empty()) {
            error(hp, "expected a nonempty array");
            return std::nullopt;
        }
        std::set<std::string> seen;
        for (std::size_t i = 0; i < hs->size(); ++i) {
            const json& h = (*hs)[i];
            const std::string p = at(hp, i);
            if (!object(h, p)) continue;
            allowed(h, {"label", "lower", "upper", "regions"}, p);
            Hypothesis hyp;
            hyp.label = string(h, "label", p).value_or("");
            if (!seen.insert(hyp.label).second) error(at(p, "label"), "duplicate hypothesis label");
            if (h.contains("regions")) {
                const json& rs = h["regions"];
                if (!rs.is_array()) {
                    error(at(p, "regions"), "expected an array of [lower, upper] pairs");
                    continue;
                }
                for (std::size_t k = 0; k < rs.size(); ++k) {
                    if (auto r = bound_pair(rs[k], at(at(p, "regions"), k))) hyp.regions.push_back(*r);
                }
            } else {
                Interval r{-kInf, kInf};
                if (h.contains("lower") && !h["lower"].is_null()) r.lower = number(h, "lower", p).value_or(-kInf);
                if (h.contains("upper") && !h["upper"].is_null()) r.upper = number(h, "upper", p).value_or(kInf);
                if (r.lower > r.upper) error(p, "lower bound exceeds upper bound");
                hyp.regions.push_back(r);
            }
            out.partition.hypotheses.push_back(hyp);
        }
        if (j.contains("utilities")) {
            const auto actions = strings(j, "actions", path);
            if (!actions) return std::nullopt;
            out.actions = *actions;
            const json& u = j["utilities"];
            const std::size_t cols = u.is_array() && !u.empty() && u[0].is_array() ? u[0].size() : 0;
            out.utilities = matrix(j, "utilities", path, actions->size(), cols, "action", "hypothesis");
        } else if (j.contains("actions")) {
            error(at(path, "actions"), "actions require a utilities matrix");
        }
        return out;
    }

    ModelSpec model(const json& root) {
        ModelSpec out;
        const json& m = root["model"];
        if (!object(m, "/model")) return out;
        allowed(m, {"likelihood", "known", "prior"}, "/model");
        if (auto l = string(m, "likelihood", "/model")) {
            if (auto lik = parse_likelihood(*l)) out.likelihood = *lik;
            else error("/model/likelihood", "unknown likelihood '" + *l + "'");
        }
        if (auto k = number(m, "known", "/model", false)) out.known = *k;
        if (needs_known_constant(out.likelihood) && std::isnan(out.known)) {
            error("/model/known", "required for likelihood '" +
                                      std::string(likelihood_name(out.likelihood)) + "'");
        }
        if (const json* p = member(m, "prior", "/model", true)) out.prior = prior(*p, "/model/prior");
        out.data = data(root, "/data");
        if (const json* e = member(root, "estimate", "", false)) {
            if (object(*e, "/estimate")) {
                allowed(*e, {"utilities"}, "/estimate");
                if (auto names = strings(*e, "utilities", "/estimate")) {
                    out.estimates.clear();
                    for (const auto& n : *names) {
                        if (n == "quadratic") out.estimates.push_back(EstimationUtility::Quadratic);
                        else if (n == "absolute") out.estimates.push_back(EstimationUtility::Absolute);
                        else if (n == "relative_quadratic") out.estimates.push_back(EstimationUtility::RelativeQuadratic);
                        else error("/estimate/utilities", "unknown estimation utility '" + n + "'");
                    }
                }
            }
        }
        if (const json* h = member(root, "hpd", "", false)) {
            if (object(*h, "/hpd")) {
                allowed(*h, {"mass", "target"}, "/hpd");
                if (auto mass = number(*h, "mass", "/hpd", false)) {
                    if (!(*mass > 0.0 && *mass < 1.0)) error("/hpd/mass", "must lie in (0, 1)");
                    out.hpd_mass = *mass;
                }
                if (auto t = string(*h, "target", "/hpd", false)) {
                    if (*t != "prior" && *t != "posterior") error("/hpd/target", "must be 'prior' or 'posterior'");
                    out.hpd_target = *t;
                }
            }
        }
        if (const json* t = member(root, "test", "", false)) out.test = test(*t, "/test");
        if (const json* p = member(root, "predict", "", false)) {
            if (object(*p, "/predict")) {
                allowed(*p, {"points", "simulate"}, "/predict");
                if (auto pts = numbers(*p, "points", "/predict", false)) out.predict_points = *pts;
                if (auto s = number(*p, "simulate", "/predict", false)) {
                    if (*s < 0 || std::floor(*s) != *s) error("/predict/simulate", "must be a nonnegative integer");
                    else out.simulate = static_cast<std::size_t>(*s);
                }
            }
        }
        return out;
    }

    GridSpec grid(const json& root) {
        GridSpec out;
        const json& g = root["grid"];
        if (!object(g, "/grid")) return out;
        allowed(g, {"likelihood", "trials", "support", "weights", "stake"}, "/grid");
        if (auto l = string(g, "likelihood", "/grid")) {
            static const std::map<std::string, GridFamily> names = {
                {"bernoulli", GridFamily::Bernoulli}, {"binomial", GridFamily::Binomial},
                {"poisson", GridFamily::Poisson},     {"geometric", GridFamily::Geometric},
                {"exponential", GridFamily::Exponential}};
            if (auto it = names.find(*l); it != names.end()) out.likelihood.family = it->second;
            else error("/grid/likelihood", "unknown grid likelihood '" + *l + "'");
        }
        if (auto t = number(g, "trials", "/grid", out.likelihood.family == GridFamily::Binomial)) {
            if (*t < 1 || std::floor(*t) != *t) error("/grid/trials", "must be a positive integer");
            else out.likelihood.trials = static_cast<int>(*t);
        }
        out.support = numbers(g, "support", "/grid").value_or(std::vector<double>{});
        out.weights = numbers(g, "weights", "/grid").value_or(std::vector<double>{});
        if (out.support.size() != out.weights.size()) {
            error("/grid/weights", "must have one weight per support point");
        } else if (!out.support.empty()) {
            try {
                GridPrior(out.support, out.weights);
            } catch (const Error& e) {
                error("/grid", e.what());
            }
        }
        out.stake = number(g, "stake", "/grid", false);
        out.data = data(root, "/data");
        return out;
    }

    EventSpec event(const json& root) {
        EventSpec out;
        const json& e = root["event"];
        if (!object(e, "/event")) return out;
        allowed(e, {"prior", "p_evidence_given_event", "p_evidence_given_complement"}, "/event");
        if (const json* p = member(e, "prior", "/event", true)) {
            if (p->is_number()) out.priors = {p->get<double>()};
            else out.priors = numbers_of(*p, "/event/prior").value_or(std::vector<double>{});
        }
        out.p_given_event = number(e, "p_evidence_given_event", "/event").value_or(0.0);
        out.p_given_complement = number(e, "p_evidence_given_complement", "/event").value_or(0.0);
        for (double v : out.priors) {
            if (!(v >= 0.0 && v <= 1.0)) error("/event/prior", "probabilities must lie in [0, 1]");
        }
        return out;
    }

    std::optional<DecisionProblem> problem(const json& j, const std::string& path,
                                           const std::set<std::string>& extra) {
        if (!object(j, path)) return std::nullopt;
        std::set<std::string> keys = {"actions", "states", "utilities", "probs", "probs_by_action"};
        keys.insert(extra.begin(), extra.end());
        allowed(j, keys, path);
        const auto actions = strings(j, "actions", path);
        const auto states = strings(j, "states", path);
        // Keep checking the remaining fields against the declared sizes even when
        // the labels themselves are invalid, so every problem is reported at once.
        const auto count = [&](const char* key) -> std::optional<std::size_t> {
            if (j.contains(key) && j[key].is_array()) return j[key].size();
            return std::nullopt;
        };
        const auto n_actions = count("actions"), n_states = count("states");
        if (!n_actions || !n_states) return std::nullopt;
        const auto u = matrix(j, "utilities", path, *n_actions, *n_states, "action", "state");
        if (j.contains("probs_by_action")) {
            const auto pm = matrix(j, "probs_by_action", path, *n_actions, *n_states, "action", "state");
            if (!actions || !states || !u || !pm) return std::nullopt;
            try {
                return DecisionProblem(*actions, *states, *u, *pm);
            } catch (const Error& e) {
                error(at(path, "probs_by_action"), e.what());
                return std::nullopt;
            }
        }
        const auto p = numbers(j, "probs", path);
        if (!p) return std::nullopt;
        if (p->size() != *n_states) {
            error(at(path, "probs"), "has " + std::to_string(p->size()) + " entries, expected " +
                                         std::to_string(*n_states) + " (one per state)");
            return std::nullopt;
        }
        const auto pv = probs(*p, states ? *states : default_labels(*n_states), at(path, "probs"));
        if (!actions || !states || !u || !pv) return std::nullopt;
        return DecisionProblem(*actions, *states, *u, *pv);
    }

    std::optional<PortfolioSpec> portfolio(const json& root) {
        const json& j = root["portfolio"];
        if (!object(j, "/portfolio")) return std::nullopt;
        allowed(j, {"returns", "probs", "states", "rate", "fractions", "risk_aversion"}, "/portfolio");
        const auto returns = numbers(j, "returns", "/portfolio");
        const auto p = numbers(j, "probs", "/portfolio");
        const auto rate = number(j, "rate", "/portfolio");
        const auto fractions = numbers(j, "fractions", "/portfolio");
        const auto aversion = numbers(j, "risk_aversion", "/portfolio");
        auto states = strings(j, "states", "/portfolio", false);
        if (!returns || !p || !rate || !fractions || !aversion) return std::nullopt;
        if (returns->size() != p->size()) {
            error("/portfolio/probs", "must have one probability per return scenario");
            return std::nullopt;
        }
        if (!states) {
            states.emplace();
            for (std::size_t i = 0; i < returns->size(); ++i) states->push_back("E" + std::to_string(i + 1));
        }
        if (states->size() != returns->size()) {
            error("/portfolio/states", "must have one label per return scenario");
            return std::nullopt;
        }
        for (double a : *aversion) {
            if (a < 0.0) error("/portfolio/risk_aversion", "values must be nonnegative");
        }
        const auto pv = probs(*p, *states, "/portfolio/probs");
        if (!pv) return std::nullopt;
        PortfolioSpec out;
        out.returns = Eigen::Map<const Eigen::VectorXd>(returns->data(), static_cast<Eigen::Index>(returns->size()));
        out.probs = *pv;
        out.rate = *rate;
        out.fractions = *fractions;
        out.risk_aversion = *aversion;
        return out;
    }

    std::optional<VoiSpec> voi(const json& root) {
        const json& j = root["voi"];
        auto base = problem(j, "/voi", {"experiment"});
        const json* e = member(j, "experiment", "/voi", true);
        if (!e || !object(*e, "/voi/experiment")) return std::nullopt;
        allowed(*e, {"outcomes", "likelihood", "cost"}, "/voi/experiment");
        const auto outcomes = strings(*e, "outcomes", "/voi/experiment");
        if (!base || !outcomes) return std::nullopt;
        const auto lik = matrix(*e, "likelihood", "/voi/experiment", outcomes->size(),
                                base->states().size(), "outcome", "state");
        Eigen::VectorXd cost = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(outcomes->size()));
        if (const json* c = member(*e, "cost", "/voi/experiment", false)) {
            if (c->is_number()) {
                cost.setConstant(c->get<double>());
            } else if (auto cs = numbers_of(*c, "/voi/experiment/cost")) {
                if (cs->size() != outcomes->size()) error("/voi/experiment/cost", "must have one cost per outcome");
                else cost = Eigen::Map<const Eigen::VectorXd>(cs->data(), static_cast<Eigen::Index>(cs->size()));
            }
        }
        if (!lik) return std::nullopt;
        for (Eigen::Index s = 0; s < lik->cols(); ++s) {
            if (std::abs(lik->col(s).sum() - 1.0) > 1e-12) {
                error("/voi/experiment/likelihood",
                      "column for state '" + base->states()[static_cast<std::size_t>(s)] + "' does not sum to 1");
            }
        }
        if ((lik->array() < 0.0).any()) error("/voi/experiment/likelihood", "entries must be nonnegative");
        return VoiSpec{*base, Experiment{*outcomes, *lik, cost}};
    }

    TreeDraft tree_node(const json& j, const std::string& path, std::set<std::string>& ids,
                        const std::map<std::string, double>& params) {
        TreeDraft out;
        if (!object(j, path)) return out;
        if (auto id = string(j, "id", path, false)) {
            out.id = *id;
            if (!ids.insert(*id).second) error(at(path, "id"), "duplicate node id '" + *id + "'");
        }
        const int kinds = static_cast<int>(j.contains("utility")) + static_cast<int>(j.contains("decision")) +
                          static_cast<int>(j.contains("chance"));
        if (kinds != 1) {
            error(path, "a node has exactly one of 'utility', 'decision' or 'chance'");
            return out;
        }
        if (j.contains("utility")) {
            allowed(j, {"id", "utility"}, path);
            out.kind = TreeNode::Kind::Terminal;
            out.utility = number(j, "utility", path).value_or(0.0);
            return out;
        }
        const bool chance = j.contains("chance");
        const std::string key = chance ? "chance" : "decision";
        allowed(j, {"id", key}, path);
        out.kind = chance ? TreeNode::Kind::Chance : TreeNode::Kind::Decision;
        const json& branches = j[key];
        const std::string bp = at(path, key);
        if (!branches.is_array() || branches.empty()) {
            error(bp, "expected a nonempty array of branches");
            return out;
        }
        double total = 0.0;
        for (std::size_t i = 0; i < branches.size(); ++i) {
            const json& b = branches[i];
            const std::string p = at(bp, i);
            if (!object(b, p)) continue;
            allowed(b, chance ? std::set<std::string>{"label", "prob", "cost", "node"}
                              : std::set<std::string>{"label", "cost", "node"},
                    p);
            out.labels.push_back(string(b, "label", p).value_or(""));
            if (chance) {
                const double pr = number(b, "prob", p).value_or(0.0);
                if (!(pr >= 0.0 && pr <= 1.0)) error(at(p, "prob"), "must lie in [0, 1]");
                out.probs.push_back(pr);
                total += pr;
            }
            if (const json* c = member(b, "cost", p, false)) {
                if (c->is_number()) {
                    out.costs.emplace_back(c->get<double>());
                } else if (c->is_string()) {
                    const std::string name = c->get<std::string>();
                    if (!params.count(name)) error(at(p, "cost"), "unknown parameter '" + name + "'");
                    out.costs.emplace_back(name);
                } else {
                    error(at(p, "cost"), "expected a number or a parameter name");
                    out.costs.emplace_back(0.0);
                }
            } else {
                out.costs.emplace_back(0.0);
            }
            if (const json* n = member(b, "node", p, true)) out.children.push_back(tree_node(*n, at(p, "node"), ids, params));
            else out.children.emplace_back();
        }
        if (chance && std::abs(total - 1.0) > 1e-12) error(bp, "branch probabilities do not sum to 1");
        return out;
    }

    std::optional<TreeSpec> tree(const json& root) {
        const json& j = root["tree"];
        if (!object(j, "/tree")) return std::nullopt;
        allowed(j, {"parameters", "root"}, "/tree");
        TreeSpec out;
        if (const json* p = member(j, "parameters", "/tree", false)) {
            if (object(*p, "/tree/parameters")) {
                for (auto it = p->begin(); it != p->end(); ++it) {
                    if (auto v = as_number(it.value(), at("/tree/parameters", it.key()))) out.parameters[it.key()] = *v;
                }
            }
        }
        const json* r = member(j, "root", "/tree", true);
        if (!r) return std::nullopt;
        std::set<std::string> ids;
        out.root = tree_node(*r, "/tree/root", ids, out.parameters);
        return out;
    }

    std::optional<std::size_t> resolve_correct(const std::string& token, const std::vector<std::string>& labels,
                                               const std::string& path) {
        for (std::size_t i = 0; i < labels.size(); ++i) {
            if (labels[i] == token) return i;
        }
        double v;
        if (parse_double(token, v) && std::floor(v) == v && v >= 1 && v <= static_cast<double>(labels.size())) {
            return static_cast<std::size_t>(v) - 1;
        }
        error(path, "correct option '" + token + "' is neither a label nor a 1-based index");
        return std::nullopt;
    }

    std::optional<ScoringSpec> scoring(const json& root) {
        const json& j = root["scoring"];
        if (!object(j, "/scoring")) return std::nullopt;
        allowed(j, {"rule", "A", "B", "labels", "options", "responses", "csv"}, "/scoring");
        ScoringSpec out;
        auto labels = strings(j, "labels", "/scoring", false);
        if (!labels) {
            if (auto m = number(j, "options", "/scoring", false)) {
                if (*m < 2 || std::floor(*m) != *m) {
                    error("/scoring/options", "must be an integer >= 2");
                    return std::nullopt;
                }
                labels = default_labels(static_cast<std::size_t>(*m));
                for (std::size_t i = 0; i < labels->size(); ++i) (*labels)[i] = std::to_string(i + 1);
            } else {
                error("/scoring", "either 'labels' or 'options' is required");
                return std::nullopt;
            }
        }
        out.labels = *labels;
        const std::size_t m = labels->size();
        out.rule_name = string(j, "rule", "/scoring").value_or("");
        try {
            if (out.rule_name == "exam") {
                if (j.contains("A") || j.contains("B")) error("/scoring", "the exam rule fixes A and B");
                out.rule = exam_rule(static_cast<int>(m));
            } else if (out.rule_name == "quadratic" || out.rule_name == "logarithmic") {
                const double A = number(j, "A", "/scoring", false).value_or(1.0);
                Eigen::VectorXd B;
                if (auto b = numbers(j, "B", "/scoring", false)) {
                    if (b->size() != m) error("/scoring/B", "must have one offset per label");
                    else B = Eigen::Map<const Eigen::VectorXd>(b->data(), static_cast<Eigen::Index>(m));
                }
                out.rule = out.rule_name == "quadratic" ? ScoreRule::quadratic(A, B) : ScoreRule::logarithmic(A, B);
            } else if (!out.rule_name.empty()) {
                error("/scoring/rule", "unknown rule '" + out.rule_name + "'");
            }
        } catch (const Error& e) {
            error("/scoring", e.what());
        }
        const bool inline_responses = j.contains("responses");
        if (inline_responses == j.contains("csv")) {
            error("/scoring", "exactly one of 'responses' or 'csv' is required");
            return std::nullopt;
        }
        if (inline_responses) {
            const json& rs = j["responses"];
            if (!rs.is_array()) {
                error("/scoring/responses", "expected an array");
                return std::nullopt;
            }
            for (std::size_t i = 0; i < rs.size(); ++i) {
                const std::string p = at("/scoring/responses", i);
                if (!object(rs[i], p)) continue;
                allowed(rs[i], {"id", "probs", "correct"}, p);
                const std::string id = string(rs[i], "id", p, false).value_or("q" + std::to_string(i + 1));
                const auto q = numbers(rs[i], "probs", p);
                std::optional<std::size_t> correct;
                if (const json* c = member(rs[i], "correct", p, true)) {
                    if (c->is_string()) correct = resolve_correct(c->get<std::string>(), out.labels, at(p, "correct"));
                    else if (c->is_number_integer()) correct = resolve_correct(std::to_string(c->get<long>()), out.labels, at(p, "correct"));
                    else error(at(p, "correct"), "expected a label or a 1-based index");
                }
                if (!q || !correct) continue;
                if (q->size() != m) {
                    error(at(p, "probs"), "has " + std::to_string(q->size()) + " entries, expected " + std::to_string(m));
                    continue;
                }
                if (auto pv = probs(*q, out.labels, at(p, "probs"))) out.responses.push_back({id, *pv, *correct});
            }
        } else {
            const std::string csv = string(j, "csv", "/scoring").value_or("");
            std::vector<std::vector<std::string>> rows;
            try {
                rows = parse_rows(read_file((std::filesystem::path(base_dir_) / csv).string()));
            } catch (const InputError& e) {
                error("/scoring/csv", e.what());
                return std::nullopt;
            }
            double probe;
            if (!rows.empty() && rows[0].size() > 1 && !parse_double(rows[0][1], probe)) rows.erase(rows.begin());
            for (std::size_t i = 0; i < rows.size(); ++i) {
                const std::string p = csv + ":" + std::to_string(i + 1);
                if (rows[i].size() != m + 2) {
                    error(p, "expected question, " + std::to_string(m) + " probabilities and the correct option");
                    continue;
                }
                std::vector<double> q(m);
                bool ok = true;
                for (std::size_t k = 0; k < m; ++k) {
                    if (!parse_double(rows[i][k + 1], q[k])) {
                        error(p, "'" + rows[i][k + 1] + "' is not a number");
                        ok = false;
                    }
                }
                const auto correct = resolve_correct(rows[i][m + 1], out.labels, p);
                if (!ok || !correct) continue;
                if (auto pv = probs(q, out.labels, p)) out.responses.push_back({rows[i][0], *pv, *correct});
            }
        }
        return out;
    }

    std::optional<DiscrepancySpec> discrepancy(const json& root) {
        const json& j = root["discrepancy"];
        if (!object(j, "/discrepancy")) return std::nullopt;
        if (j.contains("binomial_poisson")) {
            allowed(j, {"binomial_poisson"}, "/discrepancy");
            const json& b = j["binomial_poisson"];
            const std::string p = "/discrepancy/binomial_poisson";
            if (!object(b, p)) return std::nullopt;
            allowed(b, {"n", "theta"}, p);
            const auto ns = numbers(b, "n", p);
            const auto ts = numbers(b, "theta", p);
            if (!ns || !ts) return std::nullopt;
            DiscrepancySpec::BinomialPoisson out;
            for (double n : *ns) {
                if (n < 1 || std::floor(n) != n) error(at(p, "n"), "values must be positive integers");
                out.n.push_back(static_cast<int>(n));
            }
            for (double t : *ts) {
                if (!(t > 0.0 && t < 1.0)) error(at(p, "theta"), "values must lie in (0, 1)");
            }
            out.theta = *ts;
            return DiscrepancySpec{out};
        }
        if (j.contains("normal_approx")) {
            allowed(j, {"normal_approx"}, "/discrepancy");
            const json& list = j["normal_approx"];
            if (!list.is_array()) {
                error("/discrepancy/normal_approx", "expected an array of distributions");
                return std::nullopt;
            }
            DiscrepancySpec::NormalApprox out;
            for (std::size_t i = 0; i < list.size(); ++i) {
                if (auto d = distribution(list[i], at("/discrepancy/normal_approx", i))) out.targets.push_back(*d);
            }
            return DiscrepancySpec{out};
        }
        allowed(j, {"labels", "p", "q"}, "/discrepancy");
        const auto p = numbers(j, "p", "/discrepancy");
        const auto q = numbers(j, "q", "/discrepancy");
        if (!p || !q) return std::nullopt;
        if (p->size() != q->size()) {
            error("/discrepancy/q", "must have the same length as p");
            return std::nullopt;
        }
        const auto labels = strings(j, "labels", "/discrepancy", false).value_or(default_labels(p->size()));
        if (labels.size() != p->size()) {
            error("/discrepancy/labels", "must have one label per probability");
            return std::nullopt;
        }
        auto pv = probs(*p, labels, "/discrepancy/p");
        auto qv = probs(*q, labels, "/discrepancy/q");
        if (!pv || !qv) return std::nullopt;
        return DiscrepancySpec{DiscrepancySpec::Discrete{*pv, *qv}};
    }

    std::optional<InfoSpec> info(const json& root) {
        const json& j = root["info"];
        if (!object(j, "/info")) return std::nullopt;
        allowed(j, {"labels", "prior", "posterior", "outcomes"}, "/info");
        const auto prior = numbers(j, "prior", "/info");
        if (!prior) return std::nullopt;
        const auto labels = strings(j, "labels", "/info", false).value_or(default_labels(prior->size()));
        if (labels.size() != prior->size()) {
            error("/info/labels", "must have one label per probability");
            return std::nullopt;
        }
        const auto pv = probs(*prior, labels, "/info/prior");
        if (!pv) return std::nullopt;
        InfoSpec out{*pv, std::nullopt, {}};
        if (j.contains("posterior") == j.contains("outcomes")) {
            error("/info", "exactly one of 'posterior' or 'outcomes' is required");
            return std::nullopt;
        }
        if (auto post = numbers(j, "posterior", "/info", false)) {
            if (post->size() != labels.size()) error("/info/posterior", "must match the prior length");
            else out.posterior = probs(*post, labels, "/info/posterior");
            return out;
        }
        const json& os = j["outcomes"];
        if (!os.is_array() || os.empty()) {
            error("/info/outcomes", "expected a nonempty array");
            return std::nullopt;
        }
        for (std::size_t i = 0; i < os.size(); ++i) {
            const std::string p = at("/info/outcomes", i);
            if (!object(os[i], p)) continue;
            allowed(os[i], {"label", "marginal", "posterior"}, p);
            const std::string label = string(os[i], "label", p, false).value_or(std::to_string(i));
            const auto marg = number(os[i], "marginal", p);
            const auto post = numbers(os[i], "posterior", p);
            if (!marg || !post) continue;
            if (post->size() != labels.size()) {
                error(at(p, "posterior"), "must match the prior length");
                continue;
            }
            if (auto pp = probs(*post, labels, at(p, "posterior"))) out.outcomes.push_back({label, *marg, *pp});
        }
        return out;
    }

private:
    std::string base_dir_;
};

// The parser's message already carries the line and column.
std::string syntax_message(const nlohmann::json::parse_error& e) {
    std::string msg = e.what();
    if (const auto pos = msg.find("] "); msg.rfind("[json.exception", 0) == 0 && pos != std::string::npos) {
        msg.erase(0, pos + 2);
    }
    return msg;
}

TreeNode build_node(const TreeDraft& d, const std::map<std::string, double>& params) {
    if (d.kind == TreeNode::Kind::Terminal) return TreeNode::terminal(d.utility, d.id);
    std::vector<TreeNode> children;
    for (const TreeDraft& c : d.children) children.push_back(build_node(c, params));
    std::vector<double> costs;
    for (const auto& c : d.costs) {
        if (const auto* v = std::get_if<double>(&c)) costs.push_back(*v);
        else costs.push_back(params.at(std::get<std::string>(c)));
    }
    if (d.kind == TreeNode::Kind::Decision) return TreeNode::decision(d.labels, std::move(children), d.id, costs);
    return TreeNode::chance(d.labels, d.probs, std::move(children), d.id, costs);
}

}  // namespace

TreeNode build_tree(const TreeSpec& spec) { return validated_tree(build_node(spec.root, spec.parameters)); }

AnalysisSpec parse_spec_text(const std::string& text, const std::string& base_dir) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        throw SpecError({"syntax: " + syntax_message(e)});
    }
    Parser p(base_dir);
    if (!root.is_object()) throw SpecError({"/: the spec must be a JSON object"});
    std::vector<std::string> kinds;
    for (auto it = root.begin(); it != root.end(); ++it) {
        if (kKinds.count(it.key())) kinds.push_back(it.key());
    }
    if (kinds.size() != 1) {
        std::string msg = "/: exactly one analysis block is required (model, grid, event, decision, "
                          "portfolio, voi, tree, scoring, discrepancy or info); found " +
                          std::to_string(kinds.size());
        throw SpecError({msg});
    }
    const std::string kind = kinds.front();
    std::set<std::string> top = {kind, "title"};
    if (kind == "model") top.insert({"data", "estimate", "hpd", "test", "predict"});
    if (kind == "grid") top.insert("data");
    p.allowed(root, top, "");

    AnalysisSpec spec{kind, p.string(root, "title", "", false).value_or(""), ModelSpec{}};
    if (kind == "model") spec.body = p.model(root);
    else if (kind == "grid") spec.body = p.grid(root);
    else if (kind == "event") spec.body = p.event(root);
    else if (kind == "decision") {
        if (auto d = p.problem(root["decision"], "/decision", {})) spec.body = DecisionSpec{*d};
    } else if (kind == "portfolio") {
        if (auto d = p.portfolio(root)) spec.body = *d;
    } else if (kind == "voi") {
        if (auto d = p.voi(root)) spec.body = *d;
    } else if (kind == "tree") {
        if (auto d = p.tree(root)) {
            if (p.errors.empty()) {
                try {
                    build_tree(*d);
                } catch (const Error& e) {
                    p.error("/tree", e.what());
                }
            }
            spec.body = *d;
        }
    } else if (kind == "scoring") {
        if (auto d = p.scoring(root)) spec.body = *d;
    } else if (kind == "discrepancy") {
        if (auto d = p.discrepancy(root)) spec.body = *d;
    } else if (kind == "info") {
        if (auto d = p.info(root)) spec.body = *d;
    }
    if (!p.errors.empty()) throw SpecError(p.errors);
    return spec;
}

AnalysisSpec parse_spec(const std::string& path) {
    std::string text;
    try {
        text = read_file(path);
    } catch (const InputError& e) {
        throw SpecError({e.what()});
    }
    const std::filesystem::path base = std::filesystem::path(path).parent_path();
    return parse_spec_text(text, base.string());
}

}  // namespace bayeskit::cli
