#include "zint/evaluator.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace zint {

std::vector<double> LimitPolicy::grid() const {
    std::vector<double> g(static_cast<std::size_t>(b_count));
    for (int k = 0; k < b_count; ++k) g[static_cast<std::size_t>(k)] = b_start + k * b_step;
    return g;
}

LimitPolicy make_policy(const Integrand& g) {
    constexpr double phi = 0.6180339887498949;
    LimitPolicy p;
    const double hint = g.period_hint.value_or(1.0);
    p.b_step = phi * std::max(1.0, hint);

    // Growing integrands: cancellation in the tail loses ~beta*b*log2(e)
    // bits, so cap the grid at b <= 25/beta.
    auto it = g.params.find("beta");
    if (it != g.params.end() && it->second > 0.0) {
        const double b_max = 25.0 / it->second;
        p.b_start = std::min(p.b_start, b_max / 2.0);
        const double span = b_max - p.b_start;
        if (p.b_step * (p.b_count - 1) > span)
            p.b_step = span / (p.b_count - 1) * phi;  // keep the step irrational in the hint
        // the caller's acceptance check for this regime is relative, so a
        // looser absolute detection tolerance is appropriate
        p.tol = 5e-7;
    }
    return p;
}

void check_policy(const LimitPolicy& policy, std::optional<double> period_hint) {
    if (policy.b_count < 8) throw std::invalid_argument("limit policy: b_count must be >= 8");
    if (!(policy.b_step > 0.0)) throw std::invalid_argument("limit policy: b_step must be > 0");
    if (policy.window < 4) throw std::invalid_argument("limit policy: window must be >= 4");
    if (policy.window > policy.b_count)
        throw std::invalid_argument("limit policy: window larger than grid");
    if (!(policy.tol > 0.0)) throw std::invalid_argument("limit policy: tol must be > 0");
    if (!period_hint) return;

    // Reject steps that alias the integrand's period: r = step/period close
    // to p/q with small q would sample an oscillation at a near-constant
    // phase and fake convergence.
    const double r = policy.b_step / *period_hint;
    for (int q = 1; q <= 8; ++q) {
        const double rq = r * q;
        if (std::abs(rq - std::round(rq)) < 0.01) {
            std::ostringstream os;
            os << "limit policy: b_step is close to " << std::llround(rq) << "/" << q
               << " of the period hint; choose an incommensurate step";
            throw std::invalid_argument(os.str());
        }
    }
}

std::string to_string(LimitStatus s) {
    switch (s) {
        case LimitStatus::converged: return "converged";
        case LimitStatus::oscillating: return "oscillating";
        case LimitStatus::drifting: return "drifting";
    }
    return "unknown";
}

double tail(const RealFn& F, const TerminationDerivative& zd, double b) {
    double acc = 0.0;
    for (const Atom& a : zd.atoms()) {
        const double x = a.position + b;
        const double v = F(x);
        if (!std::isfinite(v)) {
            std::ostringstream os;
            os << "tail: antiderivative not finite at x = " << x;
            throw std::runtime_error(os.str());
        }
        acc += a.weight * v;
    }
    for (const DensitySegment& s : zd.segments()) {
        acc += adaptive_simpson(
            [&](double x) {
                const double v = F(x + b);
                if (!std::isfinite(v)) {
                    std::ostringstream os;
                    os << "tail: antiderivative not finite at x = " << x + b;
                    throw std::runtime_error(os.str());
                }
                return s.value(x) * v;
            },
            s.lo, s.hi, 1e-10);
    }
    return acc;
}

std::vector<TailSample> tail_sweep_serial(const RealFn& F, const TerminationDerivative& zd,
                                          const std::vector<double>& grid) {
    std::vector<TailSample> out(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) out[i] = {grid[i], tail(F, zd, grid[i])};
    return out;
}

std::vector<TailSample> tail_sweep(const RealFn& F, const TerminationDerivative& zd,
                                   const std::vector<double>& grid) {
    std::vector<TailSample> out(grid.size());
    std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic)
    for (long i = 0; i < static_cast<long>(grid.size()); ++i) {
        try {
            const std::size_t k = static_cast<std::size_t>(i);
            out[k] = {grid[k], tail(F, zd, grid[k])};
        } catch (...) {
#pragma omp critical
            if (!failure) failure = std::current_exception();
        }
    }
    if (failure) std::rethrow_exception(failure);
    return out;
}

namespace {

struct WindowFit {
    double mean = 0.0;
    double spread = 0.0;
    double slope = 0.0;
    double residual_spread = 0.0;
};

WindowFit fit_window(const std::vector<TailSample>& samples, int window) {
    WindowFit w;
    const std::size_t n = samples.size();
    const std::size_t first = n - static_cast<std::size_t>(window);
    double bmean = 0.0;
    for (std::size_t i = first; i < n; ++i) {
        w.mean += samples[i].value;
        bmean += samples[i].b;
    }
    w.mean /= window;
    bmean /= window;

    double lo = samples[first].value, hi = samples[first].value;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = first; i < n; ++i) {
        lo = std::min(lo, samples[i].value);
        hi = std::max(hi, samples[i].value);
        sxx += (samples[i].b - bmean) * (samples[i].b - bmean);
        sxy += (samples[i].b - bmean) * (samples[i].value - w.mean);
    }
    w.spread = hi - lo;
    w.slope = sxx > 0.0 ? sxy / sxx : 0.0;

    double rlo = 0.0, rhi = 0.0;
    bool start = true;
    for (std::size_t i = first; i < n; ++i) {
        const double r = samples[i].value - (w.mean + w.slope * (samples[i].b - bmean));
        if (start) {
            rlo = rhi = r;
            start = false;
        }
        rlo = std::min(rlo, r);
        rhi = std::max(rhi, r);
    }
    w.residual_spread = rhi - rlo;
    return w;
}

double half_rms(const std::vector<TailSample>& samples, std::size_t lo, std::size_t hi,
                double center) {
    double acc = 0.0;
    for (std::size_t i = lo; i < hi; ++i)
        acc += (samples[i].value - center) * (samples[i].value - center);
    return std::sqrt(acc / static_cast<double>(hi - lo));
}

}  // namespace

LimitReport detect_limit(const std::vector<TailSample>& samples, const LimitPolicy& policy) {
    if (static_cast<int>(samples.size()) < policy.window)
        throw std::invalid_argument("detect_limit: fewer samples than the window");

    LimitReport rep;
    rep.samples = samples;

    const WindowFit w = fit_window(samples, policy.window);
    rep.spread = w.spread;

    if (policy.averaging) {
        // Running means of the whole sequence, averaged over the window.
        double run = 0.0;
        std::vector<double> means;
        means.reserve(samples.size());
        for (std::size_t i = 0; i < samples.size(); ++i) {
            run += samples[i].value;
            means.push_back(run / static_cast<double>(i + 1));
        }
        double acc = 0.0;
        for (std::size_t i = means.size() - static_cast<std::size_t>(policy.window);
             i < means.size(); ++i)
            acc += means[i];
        rep.cesaro = acc / policy.window;
    }

    if (w.spread <= policy.tol) {
        rep.status = LimitStatus::converged;
        rep.limit = w.mean;
        return rep;
    }

    // Trend-dominated window: the linear fit explains the variation and
    // moves by more than the tolerance per step.
    const bool trending = std::abs(w.slope) > policy.tol / policy.b_step &&
                          w.residual_spread <= 0.5 * w.spread;
    // Growing envelope across the whole grid: compare the deviation RMS of
    // the two halves about the overall mean.
    double overall = 0.0;
    for (const TailSample& s : samples) overall += s.value;
    overall /= static_cast<double>(samples.size());
    const std::size_t mid = samples.size() / 2;
    const bool growing = half_rms(samples, mid, samples.size(), overall) >
                         1.3 * half_rms(samples, 0, mid, overall) + policy.tol;

    rep.status = (trending || growing) ? LimitStatus::drifting : LimitStatus::oscillating;
    return rep;
}

namespace {

RealFn antiderivative_of(const Integrand& g, double a,
                         std::shared_ptr<NumericAntiderivative>& keeper) {
    if (g.has_antiderivative()) return g.F;
    if (!g.f) throw std::invalid_argument("evaluate: integrand has no callback");
    keeper = numeric_antiderivative(g.f, a);
    auto n = keeper;
    return [n](double x) { return n->value(x); };
}

}  // namespace

IntegralResult evaluate(const Integrand& g, double a, const TerminationDerivative& zd,
                        const LimitPolicy& policy) {
    if (!std::isfinite(a)) throw std::invalid_argument("evaluate: lower bound must be finite");
    const ValidationReport vr = validate(zd);
    if (!vr.passed) throw std::invalid_argument("evaluate: invalid termination derivative");
    check_policy(policy, g.period_hint);

    std::shared_ptr<NumericAntiderivative> keeper;
    const RealFn F = antiderivative_of(g, a, keeper);

    IntegralResult res;
    res.a = a;
    res.f_label = g.label;
    res.termination_used = zd;
    res.limit_report = detect_limit(tail_sweep(F, zd, policy.grid()), policy);
    if (res.limit_report.status == LimitStatus::converged)
        res.value = -F(a) - *res.limit_report.limit;
    return res;
}

IntegralResult evaluate(const Integrand& g, double a, const TerminationDerivative& zd) {
    return evaluate(g, a, zd, make_policy(g));
}

UniquenessReport uniqueness_report(const Integrand& g, double a,
                                   const std::vector<TerminationDerivative>& zds,
                                   const LimitPolicy& policy) {
    if (zds.size() < 2)
        throw std::invalid_argument("uniqueness_report: need at least two terminations");

    UniquenessReport rep;
    auto add = [&](std::string desc, const TerminationDerivative& zd) {
        rep.members.push_back({std::move(desc), evaluate(g, a, zd, policy)});
    };
    for (std::size_t i = 0; i < zds.size(); ++i) {
        std::ostringstream os;
        os << "z" << i + 1;
        add(os.str(), zds[i]);
    }
    for (std::size_t i = 0; i < zds.size(); ++i)
        for (std::size_t j = i + 1; j < zds.size(); ++j) {
            std::ostringstream os;
            os << "z" << i + 1 << " (x) z" << j + 1;
            add(os.str(), combine(zds[i], zds[j]));
        }

    double lo = 0.0, hi = 0.0;
    for (const auto& m : rep.members) {
        if (!m.result.value) continue;
        const double v = *m.result.value;
        if (rep.converged_count == 0) lo = hi = v;
        lo = std::min(lo, v);
        hi = std::max(hi, v);
        ++rep.converged_count;
    }
    rep.max_discrepancy = rep.converged_count > 0 ? hi - lo : 0.0;
    rep.passed = rep.converged_count > 0 && rep.max_discrepancy <= policy.tol;
    return rep;
}

namespace {

// Keeps the caller's grid extent and tolerances but re-derives the step
// from each integrand's own period, so members with different periods
// cannot alias.
LimitPolicy rescale_step(LimitPolicy base, const Integrand& g) {
    constexpr double phi = 0.6180339887498949;
    base.b_step = phi * std::max(1.0, g.period_hint.value_or(1.0));
    return base;
}

}  // namespace

LinearityReport linearity_check(const Integrand& g1, const Integrand& g2, double alpha,
                                double beta, double a, const TerminationDerivative& zd1,
                                const TerminationDerivative& zd2, const LimitPolicy& policy) {
    LinearityReport rep;
    rep.g1_result = evaluate(g1, a, zd1, rescale_step(policy, g1));
    rep.g2_result = evaluate(g2, a, zd2, rescale_step(policy, g2));

    Integrand mix;
    mix.label = g1.label + "+" + g2.label;
    mix.f = [f1 = g1.f, f2 = g2.f, alpha, beta](double x) {
        return alpha * f1(x) + beta * f2(x);
    };
    std::shared_ptr<NumericAntiderivative> k1, k2;
    const RealFn F1 = antiderivative_of(g1, a, k1);
    const RealFn F2 = antiderivative_of(g2, a, k2);
    mix.F = [F1, F2, alpha, beta](double x) { return alpha * F1(x) + beta * F2(x); };
    if (g1.period_hint || g2.period_hint)
        mix.period_hint = std::max(g1.period_hint.value_or(1.0), g2.period_hint.value_or(1.0));

    rep.combined_result = evaluate(mix, a, combine(zd1, zd2), rescale_step(policy, mix));

    if (rep.g1_result.value && rep.g2_result.value && rep.combined_result.value) {
        rep.lhs = alpha * *rep.g1_result.value + beta * *rep.g2_result.value;
        rep.rhs = *rep.combined_result.value;
        rep.passed = std::abs(rep.lhs - rep.rhs) <= policy.tol;
    }
    return rep;
}

}  // namespace zint
