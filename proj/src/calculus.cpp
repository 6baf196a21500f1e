#include "zint/calculus.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace zint {

namespace {

double require_converged(const IntegralResult& res, const std::string& what) {
    if (!res.value) {
        std::ostringstream os;
        os << what << ": evaluation did not converge (" << to_string(res.limit_report.status)
           << ")";
        throw NonConvergentError(os.str(), res.limit_report.status);
    }
    return *res.value;
}

// The caller's policy carries the grid extent and tolerances; the step is
// re-derived from each slice's own period so no stencil or quadrature node
// can alias its oscillation.
LimitPolicy for_slice(LimitPolicy base, const Integrand& slice) {
    base.b_step = 0.6180339887498949 * std::max(1.0, slice.period_hint.value_or(1.0));
    return base;
}

}  // namespace

Integrand ParametricIntegrand::slice(double y) const {
    Integrand g;
    g.label = label;
    g.params["y"] = y;
    g.f = [fn = f, y](double x) { return fn(x, y); };
    if (F) g.F = [Fn = F, y](double x) { return Fn(x, y); };
    if (period_of) g.period_hint = period_of(y);
    return g;
}

Integrand ParametricIntegrand::slice_dy(double y) const {
    Integrand g;
    g.label = label + " d/dy";
    g.params["y"] = y;
    g.f = [fn = f_y, y](double x) { return fn(x, y); };
    if (F_y) g.F = [Fn = F_y, y](double x) { return Fn(x, y); };
    if (period_of) g.period_hint = period_of(y);
    return g;
}

ParametricIntegrand cos_over_x_family() {
    ParametricIntegrand p;
    p.label = "cos_xy_over_x";
    p.f = [](double x, double y) { return std::cos(x * y) / x; };
    p.f_y = [](double x, double y) { return -std::sin(x * y); };
    p.F = nullptr;  // no elementary antiderivative
    p.F_y = [](double x, double y) { return std::cos(x * y) / y; };
    // The integral converges conventionally but its tail dies off slowly;
    // a binomial comb of six atoms at half-period spacing knocks the
    // leading oscillation down to O(b^-6), which finite differencing in y
    // then degrades by one power, still well inside tolerance.
    p.termination_maker = [](double y) {
        const double s = M_PI / y;
        std::vector<std::pair<double, double>> entries;
        const double binom[6] = {1.0, 5.0, 10.0, 10.0, 5.0, 1.0};
        for (int i = 0; i < 6; ++i) entries.push_back({i * s, -binom[i] / 32.0});
        return make_atoms(entries);
    };
    p.termination_maker_deriv = [](double y) { return make_pair(M_PI / y); };
    p.period_of = [](double y) { return 2.0 * M_PI / std::abs(y); };
    return p;
}

ParametricIntegrand sin_xy_family() {
    ParametricIntegrand p;
    p.label = "sin_xy";
    p.f = [](double x, double y) { return std::sin(x * y); };
    p.f_y = [](double x, double y) { return x * std::cos(x * y); };
    p.F = [](double x, double y) { return -std::cos(x * y) / y; };
    p.F_y = [](double x, double y) {
        return std::cos(x * y) / (y * y) + x * std::sin(x * y) / y;
    };
    p.termination_maker = [](double y) { return make_pair(M_PI / y); };
    p.termination_maker_deriv = [](double y) { return make_triple(M_PI / y); };
    p.period_of = [](double y) { return 2.0 * M_PI / std::abs(y); };
    return p;
}

double leibniz_lhs(const ParametricIntegrand& p, double a, double y, double h,
                   const LimitPolicy& policy) {
    if (!(h > 0.0)) throw std::invalid_argument("leibniz_lhs: h must be positive");
    auto value_at = [&](double yy) {
        const Integrand slice = p.slice(yy);
        const IntegralResult res =
            evaluate(slice, a, p.termination_maker(yy), for_slice(policy, slice));
        std::ostringstream os;
        os << "leibniz_lhs at y = " << yy;
        return require_converged(res, os.str());
    };
    value_at(y);  // the stencil midpoint must converge as well
    const double hi = value_at(y + h);
    const double lo = value_at(y - h);
    return (hi - lo) / (2.0 * h);
}

double leibniz_rhs(const ParametricIntegrand& p, double a, double y,
                   const LimitPolicy& policy) {
    const Integrand slice = p.slice_dy(y);
    const IntegralResult res =
        evaluate(slice, a, p.termination_maker_deriv(y), for_slice(policy, slice));
    std::ostringstream os;
    os << "leibniz_rhs at y = " << y;
    return require_converged(res, os.str());
}

LeibnizReport leibniz_check(const ParametricIntegrand& p, double a, double y, double h,
                            const LimitPolicy& policy) {
    LeibnizReport rep;
    rep.lhs = leibniz_lhs(p, a, y, h, policy);
    rep.rhs = leibniz_rhs(p, a, y, policy);
    rep.difference = rep.lhs - rep.rhs;
    rep.tolerance = std::max(10.0 * h * h, policy.tol);
    rep.passed = std::abs(rep.difference) <= rep.tolerance;
    return rep;
}

namespace {

// Integral over [y_lo, y_hi] of fn(x, y) w(y) dy, with the panel count
// scaled by |x| so oscillation in y stays resolved.
double y_average(const RealFn2& fn, const RealFn& w, double y_lo, double y_hi, double x) {
    const double span = y_hi - y_lo;
    if (span <= 0.0) return 0.0;
    const int panels = std::max(8, static_cast<int>(std::ceil(span * std::abs(x) / 3.0)));
    return composite_gauss([&](double y) { return fn(x, y) * w(y); }, y_lo, y_hi, panels, 8);
}

}  // namespace

WeightedInterchangeProblem sin_xy_interchange_problem(int nodes) {
    WeightedInterchangeProblem p;
    p.w = [](double) { return 1.0; };
    p.f = sin_xy_family();
    p.y_lo = 1.0;
    p.y_hi = 2.0;
    p.a = 1.0;
    p.partition_count = nodes;
    // The averaged integrand's spectrum fills [y_lo, y_hi]; combined
    // triples at both endpoint frequencies give the tail a double zero at
    // each spectral edge, enough for the window spread to settle.
    p.rhs_termination = combine(make_triple(M_PI / p.y_lo), make_triple(M_PI / p.y_hi));
    p.rhs_policy.b_start = 320.0;
    p.rhs_policy.b_count = 16;
    p.rhs_policy.b_step = 0.6180339887498949 * 2.0 * M_PI;
    p.rhs_policy.window = 8;
    p.rhs_policy.tol = 5e-7;
    return p;
}

WeightedInterchangeProblem zero_mean_weight_problem(int nodes) {
    WeightedInterchangeProblem p;
    p.w = [](double y) { return y - 1.5; };
    ParametricIntegrand f;
    f.label = "sin_x";
    f.f = [](double x, double) { return std::sin(x); };
    f.f_y = [](double, double) { return 0.0; };
    f.F = [](double x, double) { return -std::cos(x); };
    f.F_y = [](double, double) { return 0.0; };
    f.termination_maker = [](double) { return make_pair(M_PI); };
    f.termination_maker_deriv = [](double) { return make_pair(M_PI); };
    f.period_of = [](double) { return 2.0 * M_PI; };
    p.f = std::move(f);
    p.y_lo = 1.0;
    p.y_hi = 2.0;
    p.a = 1.0;
    p.partition_count = nodes;
    p.rhs_termination = make_pair(M_PI);
    p.rhs_policy = LimitPolicy{};
    p.rhs_policy.b_step = 0.6180339887498949 * 2.0 * M_PI;
    return p;
}

InterchangeReport interchange_check(const WeightedInterchangeProblem& p,
                                    const LimitPolicy& policy) {
    InterchangeReport rep;
    if (!(p.y_hi >= p.y_lo)) throw std::invalid_argument("interchange_check: y_hi < y_lo");
    if (p.partition_count < 2)
        throw std::invalid_argument("interchange_check: need at least two nodes");
    if (p.y_hi == p.y_lo) {
        rep.passed = true;
        return rep;
    }
    if (!p.f.F)
        throw std::invalid_argument("interchange_check: closed-form F(x, y) required");

    // Left side: outer quadrature of w(y) times the inner integral.
    const GaussRule& rule = gauss_legendre(p.partition_count);
    const double c = 0.5 * (p.y_lo + p.y_hi);
    const double hh = 0.5 * (p.y_hi - p.y_lo);
    double lhs = 0.0;
    for (int i = 0; i < p.partition_count; ++i) {
        const double y = c + hh * rule.nodes[i];
        const Integrand slice = p.f.slice(y);
        const IntegralResult res =
            evaluate(slice, p.a, p.f.termination_maker(y), for_slice(policy, slice));
        std::ostringstream os;
        os << "interchange lhs at node y = " << y;
        lhs += rule.weights[i] * p.w(y) * require_converged(res, os.str());
    }
    lhs *= hh;
    rep.lhs = lhs;

    // Right side: the y-averaged integrand evaluated as one Z-integral,
    // with the antiderivative averaged the same way.
    Integrand avg;
    avg.label = p.f.label + " y-averaged";
    avg.f = [&p](double x) { return y_average(p.f.f, p.w, p.y_lo, p.y_hi, x); };
    avg.F = [&p](double x) { return y_average(p.f.F, p.w, p.y_lo, p.y_hi, x); };
    if (p.f.period_of) avg.period_hint = p.f.period_of(p.y_lo);
    const IntegralResult res = evaluate(avg, p.a, p.rhs_termination, p.rhs_policy);
    rep.rhs = require_converged(res, "interchange rhs");

    rep.difference = rep.lhs - rep.rhs;
    rep.passed = std::abs(rep.difference) <= policy.tol;
    return rep;
}

LinearCovResult linear_change_of_variable(const Integrand& g, double lower_bound,
                                          const TerminationDerivative& zeta, double r,
                                          double s) {
    if (!(s > 0.0))
        throw std::invalid_argument("linear_change_of_variable: s must be positive");
    const ValidationReport vr = validate(zeta);
    if (!vr.passed)
        throw std::invalid_argument("linear_change_of_variable: invalid termination");

    LinearCovResult out;
    out.lower_bound = (lower_bound - r) / s;

    out.integrand.label = g.label + " (u = " + std::to_string(r) + " + " +
                          std::to_string(s) + " x)";
    out.integrand.params = g.params;
    out.integrand.f = [f = g.f, r, s](double x) { return s * f(r + s * x); };
    if (g.F) out.integrand.F = [F = g.F, r, s](double x) { return F(r + s * x); };
    if (g.period_hint) out.integrand.period_hint = *g.period_hint / s;

    std::vector<Atom> atoms;
    for (const Atom& a : zeta.atoms()) atoms.push_back({a.position / s, a.weight});
    std::vector<DensitySegment> segments;
    for (const DensitySegment& seg : zeta.segments()) {
        Poly coeffs = seg.coefficients;
        double scale = s;
        for (auto& ck : coeffs) {
            ck *= scale;
            scale *= s;
        }
        segments.push_back({seg.lo / s, seg.hi / s, std::move(coeffs)});
    }
    out.termination =
        TerminationDerivative(std::move(atoms), std::move(segments), zeta.support() / s);
    return out;
}

CounterexampleReport substitution_counterexample(double alpha, const LimitPolicy& policy) {
    if (std::abs(alpha) > 1.0 / M_PI + 1e-15)
        throw std::invalid_argument("substitution_counterexample: |alpha| must be <= 1/pi");

    CounterexampleReport rep;
    rep.alpha = alpha;

    const Integrand sw = catalog_get("square_wave");
    LimitPolicy pol = make_policy(sw);
    pol.tol = policy.tol;

    const TerminationDerivative base_term = make_atoms({{0.0, -0.5}, {1.0, -0.5}});
    rep.base_value = require_converged(evaluate(sw, 0.0, base_term, pol),
                                       "substitution_counterexample base");

    // The warp term alpha pi f(u) cos(pi u) produced by u + alpha sin(pi u);
    // its antiderivative alpha sin(pi frac(u)) has mean 2 alpha / pi over a
    // period, which the ramp termination z(u) = 1 - u picks out.
    Integrand warp;
    warp.label = "square_wave warp term";
    warp.f = [alpha](double u) {
        return alpha * M_PI * square_wave(u) * std::cos(M_PI * u);
    };
    warp.F = [alpha](double u) { return alpha * std::sin(M_PI * (u - std::floor(u))); };
    warp.period_hint = 2.0;

    rep.warp_term_value = require_converged(evaluate(warp, 0.0, make_box(1.0), pol),
                                            "substitution_counterexample warp term");

    rep.substituted_value = rep.base_value + rep.warp_term_value;
    rep.difference = rep.substituted_value - rep.base_value;
    rep.expected_difference = 2.0 * alpha / M_PI;
    rep.passed = std::abs(rep.difference - rep.expected_difference) <= policy.tol;
    return rep;
}

}  // namespace zint
