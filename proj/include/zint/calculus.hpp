#pragma once

#include <functional>
#include <optional>
#include <string>

#include "zint/evaluator.hpp"

namespace zint {

using RealFn2 = std::function<double(double, double)>;
using TerminationMaker = std::function<TerminationDerivative(double)>;

/// Thrown by the theorem-check operations when an inner evaluation does
/// not converge; carries which evaluation failed.
struct NonConvergentError : std::runtime_error {
    NonConvergentError(const std::string& what, LimitStatus s)
        : std::runtime_error(what), status(s) {}
    LimitStatus status;
};

/// A two-variable integrand f(x, y) together with its y-partials and the
/// termination families used for the f and f_y integrals.  F may be empty
/// (no closed form); the evaluator then integrates f numerically.
struct ParametricIntegrand {
    RealFn2 f;
    RealFn2 f_y;
    RealFn2 F;    // empty when no closed form is known
    RealFn2 F_y;
    TerminationMaker termination_maker;
    TerminationMaker termination_maker_deriv;
    std::function<double(double)> period_of;  // period hint of x -> f(x, y)
    std::string label;

    Integrand slice(double y) const;
    Integrand slice_dy(double y) const;
};

/// f(x,y) = cos(xy)/x: conventionally convergent for a > 0, with no
/// elementary antiderivative; the y-derivative integral needs a
/// termination function.
ParametricIntegrand cos_over_x_family();

/// f(x,y) = sin(xy): both the integral and its y-derivative need
/// termination functions.
ParametricIntegrand sin_xy_family();

/// Central finite difference in y of the termination-function integral,
/// using the same termination family at all three stencil points.
double leibniz_lhs(const ParametricIntegrand& p, double a, double y, double h,
                   const LimitPolicy& policy);

/// The y-derivative brought inside: evaluates f_y(., y) with
/// antiderivative F_y(., y) under termination_maker_deriv(y).
double leibniz_rhs(const ParametricIntegrand& p, double a, double y,
                   const LimitPolicy& policy);

struct LeibnizReport {
    double lhs = 0.0;
    double rhs = 0.0;
    double difference = 0.0;
    double tolerance = 0.0;  // max(10 h^2, policy.tol)
    bool passed = false;
};

LeibnizReport leibniz_check(const ParametricIntegrand& p, double a, double y, double h,
                            const LimitPolicy& policy);

/// Iterated-integration problem: integral over y in [y_lo, y_hi] of
/// w(y) times the x-integral, against the x-integral of the y-average.
struct WeightedInterchangeProblem {
    RealFn w;
    ParametricIntegrand f;
    double y_lo = 0.0;
    double y_hi = 0.0;
    double a = 0.0;
    int partition_count = 33;  // outer Gauss-Legendre nodes
    TerminationDerivative rhs_termination;
    LimitPolicy rhs_policy;
};

/// The canonical problem: w = 1, f = sin(xy) on [1, 2] from a = 1.
WeightedInterchangeProblem sin_xy_interchange_problem(int nodes = 33);

/// Zero-mean weight against an integrand constant in y.
WeightedInterchangeProblem zero_mean_weight_problem(int nodes = 33);

struct InterchangeReport {
    double lhs = 0.0;  // outer quadrature of w(y) * Z-integral
    double rhs = 0.0;  // Z-integral of the y-averaged integrand
    double difference = 0.0;
    bool passed = false;
};

InterchangeReport interchange_check(const WeightedInterchangeProblem& p,
                                    const LimitPolicy& policy);

/// Result of the linear substitution u = r + s x (s > 0): the pulled-back
/// integrand carries the Jacobian, atom positions divide by s, densities
/// rescale so the mass stays -1, and the support becomes c/s.
struct LinearCovResult {
    Integrand integrand;
    TerminationDerivative termination;
    double lower_bound = 0.0;
};

LinearCovResult linear_change_of_variable(const Integrand& g, double lower_bound,
                                          const TerminationDerivative& zeta, double r,
                                          double s);

/// Demonstrates that a nonlinear substitution is not value-preserving:
/// warping the square wave by u + alpha sin(pi u) shifts the integral by
/// 2 alpha / pi (the mean of the warp term's antiderivative over one
/// period), so the naive substituted value disagrees with the original.
struct CounterexampleReport {
    double alpha = 0.0;
    double base_value = 0.0;        // integral of the square wave itself
    double warp_term_value = 0.0;   // integral of alpha pi f(u) cos(pi u)
    double substituted_value = 0.0;
    double difference = 0.0;        // substituted - base
    double expected_difference = 0.0;  // closed form 2 alpha / pi
    bool passed = false;
};

CounterexampleReport substitution_counterexample(double alpha, const LimitPolicy& policy);

}  // namespace zint
