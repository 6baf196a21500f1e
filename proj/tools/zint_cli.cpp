// Command-line front end: evaluates improper integrals under termination
// functions, compares termination choices, runs the calculus checks, and
// reproduces the six worked examples.
//
// Exit codes: 0 success/converged, 1 usage error, 2 mathematical
// non-convergence or failed check.

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "zint/calculus.hpp"
#include "zint/evaluator.hpp"
#include "zint/plane2d.hpp"

using nlohmann::json;
using namespace zint;

namespace {

constexpr int kSchemaVersion = 1;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// termination constructor mini-language
//   step | pair:<s> | triple:<s> | box:<w> | exppair:<s>,<beta>
//   | combine(<spec>,<spec>) | inline JSON
// ---------------------------------------------------------------------------

std::vector<std::string> split_top_level(const std::string& s) {
    std::vector<std::string> parts;
    int depth = 0;
    std::string cur;
    for (char c : s) {
        if (c == '(' || c == '{' || c == '[') ++depth;
        if (c == ')' || c == '}' || c == ']') --depth;
        if (c == ',' && depth == 0) {
            parts.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    parts.push_back(cur);
    return parts;
}

double parse_number(const std::string& s, const std::string& what) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw UsageError("cannot parse number '" + s + "' in " + what);
    }
}

TerminationDerivative parse_termination(const std::string& spec) {
    if (spec.empty()) throw UsageError("empty termination spec");
    if (spec.front() == '{') {
        try {
            return termination_from_json_string(spec);
        } catch (const std::exception& e) {
            throw UsageError(std::string("bad termination JSON: ") + e.what());
        }
    }
    if (spec == "step") return make_step();
    if (spec.rfind("combine(", 0) == 0 && spec.back() == ')') {
        const std::string inner = spec.substr(8, spec.size() - 9);
        const auto parts = split_top_level(inner);
        if (parts.size() != 2)
            throw UsageError("combine(...) needs exactly two components in '" + spec + "'");
        return combine(parse_termination(parts[0]), parse_termination(parts[1]));
    }
    const auto colon = spec.find(':');
    if (colon == std::string::npos)
        throw UsageError("unknown termination spec '" + spec + "'");
    const std::string head = spec.substr(0, colon);
    const std::string args = spec.substr(colon + 1);
    const auto parts = split_top_level(args);
    try {
        if (head == "pair" && parts.size() == 1)
            return make_pair(parse_number(parts[0], spec));
        if (head == "triple" && parts.size() == 1)
            return make_triple(parse_number(parts[0], spec));
        if (head == "box" && parts.size() == 1)
            return make_box(parse_number(parts[0], spec));
        if (head == "exppair" && parts.size() == 2)
            return make_exp_pair(parse_number(parts[0], spec), parse_number(parts[1], spec));
    } catch (const std::invalid_argument& e) {
        throw UsageError(std::string("bad termination '") + spec + "': " + e.what());
    }
    throw UsageError("unknown termination spec '" + spec + "'");
}

// Compact integrand spec: name[:key=value,...]
Integrand parse_integrand_spec(const std::string& spec) {
    const auto colon = spec.find(':');
    const std::string name = spec.substr(0, colon);
    std::map<std::string, double> params;
    if (colon != std::string::npos) {
        for (const auto& kv : split_top_level(spec.substr(colon + 1))) {
            const auto eq = kv.find('=');
            if (eq == std::string::npos)
                throw UsageError("bad integrand parameter '" + kv + "' in '" + spec + "'");
            params[kv.substr(0, eq)] = parse_number(kv.substr(eq + 1), spec);
        }
    }
    try {
        return catalog_get(name, params);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
}

// ---------------------------------------------------------------------------
// policy assembly: integrand defaults, then the policy file named by
// ZINT_POLICY_FILE, then explicit flags
// ---------------------------------------------------------------------------

struct PolicyFlags {
    std::optional<double> b_start;
    std::optional<int> b_count;
    std::optional<double> b_step;
    std::optional<int> window;
    std::optional<double> tol;
    bool cesaro = false;

    void attach(CLI::App* cmd) {
        cmd->add_option("--b-start", b_start, "first cutoff of the b grid");
        cmd->add_option("--b-count", b_count, "number of b samples");
        cmd->add_option("--b-step", b_step, "b grid step");
        cmd->add_option("--window", window, "trailing window for limit detection");
        cmd->add_option("--tol", tol, "limit detection tolerance");
        cmd->add_flag("--cesaro", cesaro, "report the running-mean diagnostic");
    }

    LimitPolicy resolve(LimitPolicy base) const {
        if (const char* path = std::getenv("ZINT_POLICY_FILE")) {
            std::ifstream in(path);
            if (!in) throw UsageError(std::string("cannot open policy file ") + path);
            json j;
            try {
                in >> j;
            } catch (const std::exception& e) {
                throw UsageError(std::string("bad policy file: ") + e.what());
            }
            if (j.contains("b_start")) base.b_start = j["b_start"].get<double>();
            if (j.contains("b_count")) base.b_count = j["b_count"].get<int>();
            if (j.contains("b_step")) base.b_step = j["b_step"].get<double>();
            if (j.contains("window")) base.window = j["window"].get<int>();
            if (j.contains("tol")) base.tol = j["tol"].get<double>();
            if (j.contains("averaging")) base.averaging = j["averaging"].get<bool>();
        }
        if (b_start) base.b_start = *b_start;
        if (b_count) base.b_count = *b_count;
        if (b_step) base.b_step = *b_step;
        if (window) base.window = *window;
        if (tol) base.tol = *tol;
        if (cesaro) base.averaging = true;
        return base;
    }

    json echo() const {
        json j = json::object();
        if (b_start) j["b_start"] = *b_start;
        if (b_count) j["b_count"] = *b_count;
        if (b_step) j["b_step"] = *b_step;
        if (window) j["window"] = *window;
        if (tol) j["tol"] = *tol;
        if (cesaro) j["cesaro"] = true;
        return j;
    }
};

// ---------------------------------------------------------------------------
// output formatting
// ---------------------------------------------------------------------------

json limit_report_json(const LimitReport& rep) {
    json j;
    j["status"] = to_string(rep.status);
    j["spread"] = rep.spread;
    if (rep.limit) j["limit"] = *rep.limit;
    if (rep.cesaro) j["cesaro"] = *rep.cesaro;
    return j;
}

json samples_json(const std::vector<TailSample>& samples) {
    json arr = json::array();
    for (const auto& s : samples) arr.push_back({{"b", s.b}, {"tail", s.value}});
    return arr;
}

json result_json(const IntegralResult& res) {
    json j;
    j["a"] = res.a;
    j["integrand"] = res.f_label;
    j["termination"] = json::parse(to_json_string(res.termination_used));
    j["limit"] = limit_report_json(res.limit_report);
    if (res.value) j["value"] = *res.value;
    j["samples"] = samples_json(res.limit_report.samples);
    return j;
}

struct Emitter {
    std::string format = "text";
    json record;                                   // stable payload
    std::vector<std::pair<std::string, std::string>> text_lines;
    std::vector<std::string> csv_lines;
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();

    void kv(const std::string& k, const std::string& v) { text_lines.push_back({k, v}); }
    void kv(const std::string& k, double v) {
        std::ostringstream os;
        os.precision(15);
        os << v;
        text_lines.push_back({k, os.str()});
        csv_lines.push_back(k + "," + os.str());
    }

    int flush(int exit_code) {
        const double ms = std::chrono::duration<double, std::milli>(
                              std::chrono::steady_clock::now() - t0)
                              .count();
        if (format == "json") {
            json out;
            out["record"] = record;
            out["wall_time_ms"] = ms;
            std::cout << out.dump(2) << "\n";
        } else if (format == "csv") {
            std::cout << "schema_version," << kSchemaVersion << "\n";
            for (const auto& line : csv_lines) std::cout << line << "\n";
            std::cout << "wall_time_ms," << ms << "\n";
        } else {
            for (const auto& [k, v] : text_lines) std::cout << k << ": " << v << "\n";
            std::cout << "wall time: " << ms << " ms\n";
        }
        return exit_code;
    }
};

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(15);
    os << v;
    return os.str();
}

// ---------------------------------------------------------------------------
// subcommand payloads
// ---------------------------------------------------------------------------

struct EvalOptions {
    std::string integrand;
    std::map<std::string, double> params;
    double a = 0.0;
    std::string termination;
    PolicyFlags policy;
    std::string format = "text";
};

int run_eval(const EvalOptions& opt) {
    const Integrand g = [&] {
        try {
            return catalog_get(opt.integrand, opt.params);
        } catch (const std::invalid_argument& e) {
            throw UsageError(e.what());
        }
    }();
    const TerminationDerivative zd = parse_termination(opt.termination);
    LimitPolicy policy;
    try {
        policy = opt.policy.resolve(make_policy(g));
        check_policy(policy, g.period_hint);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }

    Emitter em;
    em.format = opt.format;
    const IntegralResult res = evaluate(g, opt.a, zd, policy);

    em.record["schema_version"] = kSchemaVersion;
    em.record["command"] = "eval";
    em.record["config"] = {{"integrand", opt.integrand},
                           {"params", opt.params},
                           {"a", opt.a},
                           {"termination", opt.termination},
                           {"policy", opt.policy.echo()}};
    em.record["result"] = result_json(res);

    em.kv("integrand", opt.integrand);
    em.kv("a", opt.a);
    em.kv("status", to_string(res.limit_report.status));
    em.csv_lines.push_back("status," + to_string(res.limit_report.status));
    if (res.value) em.kv("value", *res.value);
    em.kv("spread", res.limit_report.spread);
    if (res.limit_report.cesaro) em.kv("cesaro", *res.limit_report.cesaro);
    for (const auto& s : res.limit_report.samples)
        em.csv_lines.push_back("sample," + fmt(s.b) + "," + fmt(s.value));
    return em.flush(res.converged() ? 0 : 2);
}

struct CompareOptions {
    std::string integrand;
    std::map<std::string, double> params;
    double a = 0.0;
    std::vector<std::string> terminations;
    PolicyFlags policy;
    std::string format = "text";
};

int run_compare(const CompareOptions& opt) {
    const Integrand g = [&] {
        try {
            return catalog_get(opt.integrand, opt.params);
        } catch (const std::invalid_argument& e) {
            throw UsageError(e.what());
        }
    }();
    if (opt.terminations.size() < 2)
        throw UsageError("compare needs at least two --termination specs");
    std::vector<TerminationDerivative> zds;
    for (const auto& spec : opt.terminations) zds.push_back(parse_termination(spec));
    const LimitPolicy policy = opt.policy.resolve(make_policy(g));

    Emitter em;
    em.format = opt.format;
    const UniquenessReport rep = uniqueness_report(g, opt.a, zds, policy);

    json members = json::array();
    for (const auto& m : rep.members) {
        json jm;
        jm["label"] = m.description;
        jm["status"] = to_string(m.result.limit_report.status);
        if (m.result.value) jm["value"] = *m.result.value;
        members.push_back(jm);
        em.kv(m.description,
              m.result.value ? fmt(*m.result.value)
                             : to_string(m.result.limit_report.status));
        em.csv_lines.push_back(
            m.description + "," +
            (m.result.value ? fmt(*m.result.value)
                            : to_string(m.result.limit_report.status)));
    }
    em.record["schema_version"] = kSchemaVersion;
    em.record["command"] = "compare";
    em.record["config"] = {{"integrand", opt.integrand},
                           {"params", opt.params},
                           {"a", opt.a},
                           {"terminations", opt.terminations},
                           {"policy", opt.policy.echo()}};
    em.record["result"] = {{"members", members},
                           {"max_discrepancy", rep.max_discrepancy},
                           {"converged_count", rep.converged_count},
                           {"passed", rep.passed}};
    em.kv("max_discrepancy", rep.max_discrepancy);
    em.kv("passed", rep.passed ? "yes" : "no");
    em.csv_lines.push_back(std::string("passed,") + (rep.passed ? "yes" : "no"));
    return em.flush(rep.passed ? 0 : 2);
}

struct LinearityOptions {
    std::string g1, g2;
    double w1 = 1.0, w2 = 1.0;
    double a = 0.0;
    std::string t1, t2;
    PolicyFlags policy;
    std::string format = "text";
};

int run_linearity(const LinearityOptions& opt) {
    const Integrand g1 = parse_integrand_spec(opt.g1);
    const Integrand g2 = parse_integrand_spec(opt.g2);
    const LimitPolicy policy = opt.policy.resolve(make_policy(g1));
    Emitter em;
    em.format = opt.format;
    const LinearityReport rep =
        linearity_check(g1, g2, opt.w1, opt.w2, opt.a,
                        parse_termination(opt.t1), parse_termination(opt.t2), policy);
    em.record["schema_version"] = kSchemaVersion;
    em.record["command"] = "linearity";
    em.record["config"] = {{"g1", opt.g1},     {"g2", opt.g2}, {"w1", opt.w1},
                           {"w2", opt.w2},     {"a", opt.a},   {"t1", opt.t1},
                           {"t2", opt.t2},     {"policy", opt.policy.echo()}};
    em.record["result"] = {{"lhs", rep.lhs}, {"rhs", rep.rhs}, {"passed", rep.passed}};
    em.kv("lhs", rep.lhs);
    em.kv("rhs", rep.rhs);
    em.kv("difference", rep.lhs - rep.rhs);
    em.kv("passed", rep.passed ? "yes" : "no");
    em.csv_lines.push_back(std::string("passed,") + (rep.passed ? "yes" : "no"));
    return em.flush(rep.passed ? 0 : 2);
}

LimitPolicy leibniz_policy_for(const std::string& problem) {
    LimitPolicy p;
    if (problem == "ex4") {
        p.b_start = 300.0;
        p.b_count = 16;
        p.window = 8;
        p.tol = 1e-9;
    } else {
        p.tol = 1e-6;
    }
    return p;
}

struct LeibnizOptions {
    std::string problem = "ex5";
    double y = 1.0;
    double a = 0.0;
    double h = 1e-4;
    PolicyFlags policy;
    std::string format = "text";
};

int run_leibniz(const LeibnizOptions& opt) {
    if (opt.problem != "ex4" && opt.problem != "ex5")
        throw UsageError("unknown leibniz problem '" + opt.problem + "' (ex4 or ex5)");
    const ParametricIntegrand p =
        opt.problem == "ex4" ? cos_over_x_family() : sin_xy_family();
    const LimitPolicy policy = opt.policy.resolve(leibniz_policy_for(opt.problem));
    Emitter em;
    em.format = opt.format;
    const LeibnizReport rep = leibniz_check(p, opt.a, opt.y, opt.h, policy);
    em.record["schema_version"] = kSchemaVersion;
    em.record["command"] = "leibniz";
    em.record["config"] = {{"problem", opt.problem}, {"y", opt.y},
                           {"a", opt.a},             {"h", opt.h},
                           {"policy", opt.policy.echo()}};
    em.record["result"] = {{"lhs", rep.lhs},
                           {"rhs", rep.rhs},
                           {"tolerance", rep.tolerance},
                           {"passed", rep.passed}};
    em.kv("lhs", rep.lhs);
    em.kv("rhs", rep.rhs);
    em.kv("difference", rep.difference);
    em.kv("tolerance", rep.tolerance);
    em.kv("passed", rep.passed ? "yes" : "no");
    em.csv_lines.push_back(std::string("passed,") + (rep.passed ? "yes" : "no"));
    return em.flush(rep.passed ? 0 : 2);
}

struct InterchangeOptions {
    std::string problem = "sin_xy";
    int nodes = 33;
    PolicyFlags policy;
    std::string format = "text";
};

int run_interchange(const InterchangeOptions& opt) {
    WeightedInterchangeProblem problem;
    if (opt.problem == "sin_xy")
        problem = sin_xy_interchange_problem(opt.nodes);
    else if (opt.problem == "zero_mean")
        problem = zero_mean_weight_problem(opt.nodes);
    else
        throw UsageError("unknown interchange problem '" + opt.problem +
                         "' (sin_xy or zero_mean)");
    LimitPolicy policy;
    policy.tol = 1e-6;
    policy = opt.policy.resolve(policy);
    Emitter em;
    em.format = opt.format;
    const InterchangeReport rep = interchange_check(problem, policy);
    em.record["schema_version"] = kSchemaVersion;
    em.record["command"] = "interchange";
    em.record["config"] = {{"problem", opt.problem},
                           {"nodes", opt.nodes},
                           {"policy", opt.policy.echo()}};
    em.record["result"] = {{"lhs", rep.lhs}, {"rhs", rep.rhs}, {"passed", rep.passed}};
    em.kv("lhs", rep.lhs);
    em.kv("rhs", rep.rhs);
    em.kv("difference", rep.difference);
    em.kv("passed", rep.passed ? "yes" : "no");
    em.csv_lines.push_back(std::string("passed,") + (rep.passed ? "yes" : "no"));
    return em.flush(rep.passed ? 0 : 2);
}

struct CovLinearOptions {
    std::string integrand = "sin_ax:alpha=1";
    double a = 0.0;
    std::string termination = "pair:3.141592653589793";
    double r = 0.0;
    double s = 1.0;
    int trials = 0;
    unsigned seed = 0;
    PolicyFlags policy;
    std::string format = "text";
};

int run_cov_linear(const CovLinearOptions& opt) {
    const Integrand g = parse_integrand_spec(opt.integrand);
    const TerminationDerivative zeta = parse_termination(opt.termination);
    const LimitPolicy policy = opt.policy.resolve(make_policy(g));
    Emitter em;
    em.format = opt.format;

    auto run_once = [&](double r, double s) {
        const auto base = evaluate(g, opt.a, zeta, policy);
        const auto cov = [&] {
            try {
                return linear_change_of_variable(g, opt.a, zeta, r, s);
            } catch (const std::invalid_argument& e) {
                throw UsageError(e.what());
            }
        }();
        const auto moved =
            evaluate(cov.integrand, cov.lower_bound, cov.termination, make_policy(cov.integrand));
        if (!base.value || !moved.value)
            return std::numeric_limits<double>::quiet_NaN();
        return std::abs(*base.value - *moved.value);
    };

    json trials_json = json::array();
    double max_err = 0.0;
    bool all_ok = true;
    if (opt.trials > 0) {
        std::mt19937 rng(opt.seed);
        std::uniform_real_distribution<double> ss(0.5, 4.0);
        std::uniform_real_distribution<double> rs(-3.0, 3.0);
        for (int i = 0; i < opt.trials; ++i) {
            const double r = rs(rng), s = ss(rng);
            const double err = run_once(r, s);
            trials_json.push_back({{"r", r}, {"s", s}, {"error", err}});
            if (!(err <= policy.tol)) all_ok = false;
            max_err = std::max(max_err, err);
        }
    } else {
        const double err = run_once(opt.r, opt.s);
        trials_json.push_back({{"r", opt.r}, {"s", opt.s}, {"error", err}});
        if (!(err <= policy.tol)) all_ok = false;
        max_err = err;
    }

    em.record["schema_version"] = kSchemaVersion;
    em.record["command"] = "cov-linear";
    em.record["config"] = {{"integrand", opt.integrand},
                           {"a", opt.a},
                           {"termination", opt.termination},
                           {"r", opt.r},
                           {"s", opt.s},
                           {"trials", opt.trials},
                           {"seed", opt.seed},
                           {"policy", opt.policy.echo()}};
    em.record["result"] = {{"trials", trials_json},
                           {"max_error", max_err},
                           {"passed", all_ok}};
    em.kv("max_error", max_err);
    em.kv("passed", all_ok ? "yes" : "no");
    em.csv_lines.push_back(std::string("passed,") + (all_ok ? "yes" : "no"));
    return em.flush(all_ok ? 0 : 2);
}

struct CovCounterOptions {
    double alpha = 0.25;
    PolicyFlags policy;
    std::string format = "text";
};

int run_cov_counterexample(const CovCounterOptions& opt) {
    LimitPolicy policy;
    policy = opt.policy.resolve(policy);
    Emitter em;
    em.format = opt.format;
    const CounterexampleReport rep = [&] {
        try {
            return substitution_counterexample(opt.alpha, policy);
        } catch (const std::invalid_argument& e) {
            throw UsageError(e.what());
        }
    }();
    em.record["schema_version"] = kSchemaVersion;
    em.record["command"] = "cov-counterexample";
    em.record["config"] = {{"alpha", opt.alpha}, {"policy", opt.policy.echo()}};
    em.record["result"] = {{"base", rep.base_value},
                           {"warp_term", rep.warp_term_value},
                           {"substituted", rep.substituted_value},
                           {"difference", rep.difference},
                           {"expected_difference", rep.expected_difference},
                           {"passed", rep.passed}};
    em.kv("base", rep.base_value);
    em.kv("substituted", rep.substituted_value);
    em.kv("difference", rep.difference);
    em.kv("expected_difference", rep.expected_difference);
    em.kv("passed", rep.passed ? "yes" : "no");
    em.csv_lines.push_back(std::string("passed,") + (rep.passed ? "yes" : "no"));
    return em.flush(rep.passed ? 0 : 2);
}

struct Eval2DOptions {
    std::string field = "gaussian";
    std::string kernel = "point";
    std::vector<std::string> families;
    double b_lo = 20.0;
    double b_hi = 40.0;
    int b_count = 16;
    double tol = 1e-6;
    double family_tol = 1e-2;
    std::string format = "text";
};

Field2D parse_field(const std::string& spec) {
    if (spec == "gaussian") return gaussian_field();
    if (spec == "sin_r2") return sin_r2_field();
    if (spec == "constant") return constant_field();
    throw UsageError("unknown field '" + spec + "' (gaussian, sin_r2, constant)");
}

Kernel2D parse_kernel(const std::string& spec) {
    if (spec.empty()) throw UsageError("empty kernel spec");
    if (spec.front() == '{') {
        try {
            return kernel_from_json_string(spec);
        } catch (const std::exception& e) {
            throw UsageError(std::string("bad kernel JSON: ") + e.what());
        }
    }
    if (spec == "point") return point_kernel();
    const auto colon = spec.find(':');
    if (colon != std::string::npos) {
        const std::string head = spec.substr(0, colon);
        const auto parts = split_top_level(spec.substr(colon + 1));
        if (head == "disk" && parts.size() == 1)
            return disk_kernel(parse_number(parts[0], spec));
        if (head == "pair" && parts.size() == 2)
            return pair_kernel(
                {parse_number(parts[0], spec), parse_number(parts[1], spec)});
    }
    throw UsageError("unknown kernel spec '" + spec + "'");
}

CurveFamily parse_family(const std::string& spec) {
    if (spec.empty()) throw UsageError("empty family spec");
    if (spec.front() == '{') {
        try {
            return family_from_json_string(spec);
        } catch (const std::exception& e) {
            throw UsageError(std::string("bad family JSON: ") + e.what());
        }
    }
    if (spec == "circle") return circle_family();
    if (spec == "square") return square_family();
    const auto colon = spec.find(':');
    if (colon != std::string::npos && spec.substr(0, colon) == "offset") {
        const auto parts = split_top_level(spec.substr(colon + 1));
        if (parts.size() == 2)
            return offset_circle_family(
                {parse_number(parts[0], spec), parse_number(parts[1], spec)});
    }
    throw UsageError("unknown family spec '" + spec + "'");
}

int run_eval2d(const Eval2DOptions& opt) {
    const Field2D f = parse_field(opt.field);
    const Kernel2D k = parse_kernel(opt.kernel);
    if (opt.families.size() < 2)
        throw UsageError("eval2d needs at least two --family specs");
    std::vector<CurveFamily> fams;
    for (const auto& spec : opt.families) fams.push_back(parse_family(spec));
    Policy2D policy;
    policy.b_lo = opt.b_lo;
    policy.b_hi = opt.b_hi;
    policy.b_count = opt.b_count;
    policy.tol = opt.tol;
    policy.family_tol = opt.family_tol;

    Emitter em;
    em.format = opt.format;
    const Result2D res = [&] {
        try {
            return evaluate2d(f, k, fams, policy);
        } catch (const std::invalid_argument& e) {
            throw UsageError(e.what());
        }
    }();

    json fam_json = json::array();
    for (const auto& fo : res.per_family) {
        json jf;
        jf["family"] = fo.family;
        jf["status"] = to_string(fo.report.status);
        jf["spread"] = fo.report.spread;
        if (fo.report.limit) jf["limit"] = *fo.report.limit;
        fam_json.push_back(jf);
        em.kv(fo.family, fo.report.limit ? fmt(*fo.report.limit)
                                         : to_string(fo.report.status));
        em.csv_lines.push_back(fo.family + "," +
                               (fo.report.limit ? fmt(*fo.report.limit)
                                                : to_string(fo.report.status)));
    }
    em.record["schema_version"] = kSchemaVersion;
    em.record["command"] = "eval2d";
    em.record["config"] = {{"field", opt.field},
                           {"kernel", opt.kernel},
                           {"families", opt.families},
                           {"b_lo", opt.b_lo},
                           {"b_hi", opt.b_hi},
                           {"b_count", opt.b_count},
                           {"tol", opt.tol},
                           {"family_tol", opt.family_tol}};
    em.record["result"] = {{"families", fam_json},
                           {"agreement_spread", res.agreement_spread}};
    if (res.value) em.record["result"]["value"] = *res.value;
    em.kv("agreement_spread", res.agreement_spread);
    if (res.value) em.kv("value", *res.value);
    em.kv("passed", res.value ? "yes" : "no");
    em.csv_lines.push_back(std::string("passed,") + (res.value ? "yes" : "no"));
    return em.flush(res.value ? 0 : 2);
}

// ---------------------------------------------------------------------------
// demo: the six worked examples end to end
// ---------------------------------------------------------------------------

struct DemoCase {
    std::string name;
    double got = 0.0;
    double expected = 0.0;
    double tolerance = 0.0;
    bool passed = false;
};

int run_demo(const std::string& format) {
    Emitter em;
    em.format = format;
    std::vector<DemoCase> cases;

    {
        const auto res = evaluate(catalog_get("sin_ax", {{"alpha", 1.0}}), 0.0,
                                  make_pair(M_PI));
        cases.push_back({"1 sin(x) with paired impulses", res.value.value_or(NAN), 1.0, 1e-8,
                         false});
    }
    {
        const auto res = evaluate(catalog_get("x_cos_ax", {{"alpha", 1.0}}), 0.0,
                                  make_triple(M_PI));
        cases.push_back({"2 x cos(x) with triple impulses", res.value.value_or(NAN), -1.0,
                         1e-8, false});
    }
    {
        const auto res = evaluate(catalog_get("exp_sin", {{"alpha", 1.0}, {"beta", -0.5}}),
                                  0.0, make_exp_pair(M_PI, -0.5));
        cases.push_back({"3 e^{-x/2} sin(x) with weighted impulses",
                         res.value.value_or(NAN), 0.8, 1e-8, false});
    }
    {
        const LeibnizReport rep =
            leibniz_check(cos_over_x_family(), 1.0, 1.0, 1e-4, leibniz_policy_for("ex4"));
        cases.push_back({"4 d/dy of the cos(xy)/x integral", rep.lhs, rep.rhs,
                         rep.tolerance, false});
    }
    {
        const LeibnizReport rep =
            leibniz_check(sin_xy_family(), 0.0, 1.0, 1e-4, leibniz_policy_for("ex5"));
        cases.push_back({"5 d/dy of the sin(xy) integral", rep.lhs, rep.rhs, rep.tolerance,
                         false});
    }
    {
        LimitPolicy policy;
        const CounterexampleReport rep = substitution_counterexample(0.25, policy);
        cases.push_back({"6 square-wave warp gap (2a/pi)", rep.difference,
                         rep.expected_difference, 1e-8, false});
    }

    bool all = true;
    json arr = json::array();
    for (auto& c : cases) {
        c.passed = std::isfinite(c.got) && std::abs(c.got - c.expected) <= c.tolerance;
        all = all && c.passed;
        arr.push_back({{"case", c.name},
                       {"value", c.got},
                       {"expected", c.expected},
                       {"tolerance", c.tolerance},
                       {"passed", c.passed}});
        std::ostringstream os;
        os.precision(12);
        os << (c.passed ? "PASS" : "FAIL") << "  value " << c.got << "  expected "
           << c.expected;
        em.kv(c.name, os.str());
        em.csv_lines.push_back(c.name + "," + fmt(c.got) + "," + fmt(c.expected) + "," +
                               (c.passed ? "PASS" : "FAIL"));
    }
    em.record["schema_version"] = kSchemaVersion;
    em.record["command"] = "demo";
    em.record["config"] = json::object();
    em.record["result"] = {{"cases", arr}, {"passed", all}};
    em.kv("passed", all ? "yes" : "no");
    em.csv_lines.push_back(std::string("passed,") + (all ? "yes" : "no"));
    return em.flush(all ? 0 : 2);
}

void add_format(CLI::App* cmd, std::string& fmt_ref) {
    cmd->add_option("--format", fmt_ref, "output format: json, csv, text")
        ->check(CLI::IsMember({"json", "csv", "text"}));
}

void add_params(CLI::App* cmd, std::map<std::string, double>& params) {
    static const std::vector<std::string> keys{"alpha", "beta", "y", "lambda", "warp"};
    for (const auto& key : keys) {
        auto cb = [&params, key](const std::string& v) {
            params[key] = parse_number(v, "--" + key);
        };
        cmd->add_option_function<std::string>("--" + key, cb,
                                              "integrand parameter " + key);
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"improper integrals under termination functions"};
    app.require_subcommand(1);

    EvalOptions eval_opt;
    auto* eval_cmd = app.add_subcommand("eval", "evaluate one integral");
    eval_cmd->add_option("--integrand", eval_opt.integrand, "catalog integrand name")
        ->required();
    add_params(eval_cmd, eval_opt.params);
    eval_cmd->add_option("--a", eval_opt.a, "lower bound");
    eval_cmd->add_option("--termination", eval_opt.termination, "termination spec")
        ->required();
    eval_opt.policy.attach(eval_cmd);
    add_format(eval_cmd, eval_opt.format);

    CompareOptions cmp_opt;
    auto* cmp_cmd = app.add_subcommand("compare", "uniqueness across terminations");
    cmp_cmd->add_option("--integrand", cmp_opt.integrand, "catalog integrand name")
        ->required();
    add_params(cmp_cmd, cmp_opt.params);
    cmp_cmd->add_option("--a", cmp_opt.a, "lower bound");
    cmp_cmd->add_option("--termination", cmp_opt.terminations, "termination specs (repeat)")
        ->required();
    cmp_opt.policy.attach(cmp_cmd);
    add_format(cmp_cmd, cmp_opt.format);

    LinearityOptions lin_opt;
    auto* lin_cmd = app.add_subcommand("linearity", "weighted-sum identity");
    lin_cmd->add_option("--g1", lin_opt.g1, "first integrand, name:key=value,...")
        ->required();
    lin_cmd->add_option("--g2", lin_opt.g2, "second integrand")->required();
    lin_cmd->add_option("--w1", lin_opt.w1, "weight of g1");
    lin_cmd->add_option("--w2", lin_opt.w2, "weight of g2");
    lin_cmd->add_option("--a", lin_opt.a, "lower bound");
    lin_cmd->add_option("--t1", lin_opt.t1, "termination for g1")->required();
    lin_cmd->add_option("--t2", lin_opt.t2, "termination for g2")->required();
    lin_opt.policy.attach(lin_cmd);
    add_format(lin_cmd, lin_opt.format);

    LeibnizOptions lei_opt;
    auto* lei_cmd = app.add_subcommand("leibniz", "derivative under the integral");
    lei_cmd->set_help_flag("--help", "print help");  // frees -h for the step size
    lei_cmd->add_option("--problem", lei_opt.problem, "ex4 or ex5");
    lei_cmd->add_option("--y", lei_opt.y, "parameter value");
    lei_cmd->add_option("--a", lei_opt.a, "lower bound");
    lei_cmd->add_option("--h", lei_opt.h, "finite-difference step");
    lei_opt.policy.attach(lei_cmd);
    add_format(lei_cmd, lei_opt.format);

    InterchangeOptions intc_opt;
    auto* intc_cmd = app.add_subcommand("interchange", "iterated integration order");
    intc_cmd->add_option("--problem", intc_opt.problem, "sin_xy or zero_mean");
    intc_cmd->add_option("--nodes", intc_opt.nodes, "outer quadrature nodes");
    intc_opt.policy.attach(intc_cmd);
    add_format(intc_cmd, intc_opt.format);

    CovLinearOptions covl_opt;
    auto* covl_cmd = app.add_subcommand("cov-linear", "linear change of variable");
    covl_cmd->add_option("--integrand", covl_opt.integrand, "integrand, name:key=value");
    covl_cmd->add_option("--a", covl_opt.a, "lower bound");
    covl_cmd->add_option("--termination", covl_opt.termination, "termination spec");
    covl_cmd->add_option("--r", covl_opt.r, "shift");
    covl_cmd->add_option("--s", covl_opt.s, "slope (positive)");
    covl_cmd->add_option("--trials", covl_opt.trials, "randomized trials (0 = single run)");
    covl_cmd->add_option("--seed", covl_opt.seed, "random seed");
    covl_opt.policy.attach(covl_cmd);
    add_format(covl_cmd, covl_opt.format);

    CovCounterOptions covc_opt;
    auto* covc_cmd =
        app.add_subcommand("cov-counterexample", "nonlinear substitution shifts the value");
    covc_cmd->add_option("--warp-alpha", covc_opt.alpha, "warp amplitude, |alpha| <= 1/pi");
    covc_opt.policy.attach(covc_cmd);
    add_format(covc_cmd, covc_opt.format);

    Eval2DOptions e2_opt;
    auto* e2_cmd = app.add_subcommand("eval2d", "plane integral across curve families");
    e2_cmd->add_option("--field", e2_opt.field, "gaussian, sin_r2, constant");
    e2_cmd->add_option("--kernel", e2_opt.kernel, "point, disk:<r>, pair:<x>,<y>, or JSON");
    e2_cmd->add_option("--family", e2_opt.families,
                       "circle, square, offset:<x>,<y>, or JSON (repeat)");
    e2_cmd->add_option("--b-lo", e2_opt.b_lo, "smallest curve parameter");
    e2_cmd->add_option("--b-hi", e2_opt.b_hi, "largest curve parameter");
    e2_cmd->add_option("--b-count", e2_opt.b_count, "grid size");
    e2_cmd->add_option("--tol", e2_opt.tol, "per-family window tolerance");
    e2_cmd->add_option("--family-tol", e2_opt.family_tol, "cross-family tolerance");
    add_format(e2_cmd, e2_opt.format);

    std::string demo_format = "text";
    auto* demo_cmd = app.add_subcommand("demo", "reproduce the six worked examples");
    add_format(demo_cmd, demo_format);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    }

    try {
        if (*eval_cmd) return run_eval(eval_opt);
        if (*cmp_cmd) return run_compare(cmp_opt);
        if (*lin_cmd) return run_linearity(lin_opt);
        if (*lei_cmd) return run_leibniz(lei_opt);
        if (*intc_cmd) return run_interchange(intc_opt);
        if (*covl_cmd) return run_cov_linear(covl_opt);
        if (*covc_cmd) return run_cov_counterexample(covc_opt);
        if (*e2_cmd) return run_eval2d(e2_opt);
        if (*demo_cmd) return run_demo(demo_format);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const NonConvergentError& e) {
        std::cerr << "non-convergent: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
