#pragma once

#include <map>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

#include "zint/quadrature.hpp"

namespace zint {

/// A function to integrate, optionally with a closed-form antiderivative.
/// Callbacks must be pure.  When F is empty the evaluator falls back to a
/// NumericAntiderivative.
struct Integrand {
    RealFn f;
    RealFn F;  // empty when no closed form is known
    std::optional<double> period_hint;
    std::string label;
    std::map<std::string, double> params;

    bool has_antiderivative() const { return static_cast<bool>(F); }
};

/// Cumulative integral of f from a base point, cached on a grid of unit
/// panels so repeated tail queries at nearby arguments stay cheap.  Panels
/// use a fixed Gauss rule, bisected until two orders agree to the requested
/// tolerance; the subdivision is deterministic, so concurrent evaluation
/// returns the same values as serial evaluation.
class NumericAntiderivative {
public:
    NumericAntiderivative(RealFn f, double base_point, double tol = 1e-12);

    double base_point() const { return base_; }
    double operator()(double x) const { return value(x); }
    double value(double x) const;

private:
    double panel_integral(double lo, double hi) const;
    void extend_to(long panel) const;

    RealFn f_;
    double base_;
    double tol_;
    mutable std::vector<double> checkpoints_;  // checkpoints_[k] = integral over [base, base+k]
    mutable std::shared_mutex mutex_;
};

/// Named test integrands.  Parameter keys follow the catalog: alpha/beta
/// for the trigonometric entries, y for the two-variable slices, lambda
/// for the exponential decay, warp for the warped square wave.
Integrand catalog_get(const std::string& name, const std::map<std::string, double>& params = {});

std::vector<std::string> catalog_names();

std::shared_ptr<NumericAntiderivative> numeric_antiderivative(RealFn f, double base_point,
                                                              double tol = 1e-12);

/// x -> F(x) + constant; the evaluator's result is invariant to this shift.
RealFn shift_antiderivative(RealFn F, double constant);

/// The alternating +-1 square wave and its triangle-wave antiderivative.
double square_wave(double x);
double square_wave_antiderivative(double x);

}  // namespace zint
