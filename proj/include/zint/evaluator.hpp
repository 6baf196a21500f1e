#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "zint/integrand.hpp"
#include "zint/termination.hpp"

namespace zint {

/// How the b -> infinity limit of the tail functional is detected: a grid
/// of b values, a trailing window, and a spread tolerance.  The default
/// step is the golden ratio times the period hint so that a hidden
/// oscillation cannot alias to a constant on the grid.
struct LimitPolicy {
    double b_start = 50.0;
    int b_count = 32;
    double b_step = 0.6180339887498949;
    int window = 8;
    double tol = 1e-8;
    bool averaging = false;  // Cesaro diagnostic only, never the reported value

    std::vector<double> grid() const;
};

/// Default policy for an integrand: step scaled by the period hint, and,
/// for integrands growing like e^{beta x} with beta > 0, the grid capped
/// at b <= 25/beta so cancellation stays within double precision.
LimitPolicy make_policy(const Integrand& g);

/// Throws when the policy's step is a small-denominator rational multiple
/// of the period hint (aliasing risk), or violates basic bounds.
void check_policy(const LimitPolicy& policy, std::optional<double> period_hint);

struct TailSample {
    double b = 0.0;
    double value = 0.0;
};

enum class LimitStatus { converged, oscillating, drifting };

std::string to_string(LimitStatus s);

struct LimitReport {
    std::vector<TailSample> samples;
    std::optional<double> limit;
    LimitStatus status = LimitStatus::oscillating;
    double spread = 0.0;  // max - min over the final window
    std::optional<double> cesaro;  // diagnostic mean-of-running-means
};

struct IntegralResult {
    std::optional<double> value;  // -F(a) - limit, present only when converged
    double a = 0.0;
    LimitReport limit_report;
    TerminationDerivative termination_used;
    std::string f_label;

    bool converged() const { return limit_report.status == LimitStatus::converged; }
};

/// The tail functional: atoms contribute weight * F(position + b) exactly;
/// density segments are integrated against F by adaptive Simpson to 1e-10.
double tail(const RealFn& F, const TerminationDerivative& zd, double b);

/// Tail functional across a b grid.  Entries are independent; the parallel
/// kernel splits them across OpenMP threads and returns results identical
/// to the serial reference.
std::vector<TailSample> tail_sweep_serial(const RealFn& F, const TerminationDerivative& zd,
                                          const std::vector<double>& grid);
std::vector<TailSample> tail_sweep(const RealFn& F, const TerminationDerivative& zd,
                                   const std::vector<double>& grid);

LimitReport detect_limit(const std::vector<TailSample>& samples, const LimitPolicy& policy);

IntegralResult evaluate(const Integrand& g, double a, const TerminationDerivative& zd,
                        const LimitPolicy& policy);

/// evaluate() with the default policy for g.
IntegralResult evaluate(const Integrand& g, double a, const TerminationDerivative& zd);

struct UniquenessMember {
    std::string description;
    IntegralResult result;
};

struct UniquenessReport {
    std::vector<UniquenessMember> members;
    double max_discrepancy = 0.0;  // over converged members
    int converged_count = 0;
    bool passed = false;
};

/// Evaluates g under every termination and under each pairwise
/// combination; the values of all converged members must agree.
UniquenessReport uniqueness_report(const Integrand& g, double a,
                                   const std::vector<TerminationDerivative>& zds,
                                   const LimitPolicy& policy);

struct LinearityReport {
    IntegralResult g1_result;
    IntegralResult g2_result;
    IntegralResult combined_result;
    double lhs = 0.0;  // alpha * Z(g1) + beta * Z(g2)
    double rhs = 0.0;  // Z(alpha g1 + beta g2) under the combined termination
    bool passed = false;
};

LinearityReport linearity_check(const Integrand& g1, const Integrand& g2, double alpha,
                                double beta, double a, const TerminationDerivative& zd1,
                                const TerminationDerivative& zd2, const LimitPolicy& policy);

}  // namespace zint
