#pragma once

#include <functional>
#include <stdexcept>
#include <vector>

namespace zint {

using RealFn = std::function<double(double)>;

struct QuadratureError : std::runtime_error {
    QuadratureError(const std::string& what, double panel_lo, double panel_hi)
        : std::runtime_error(what), lo(panel_lo), hi(panel_hi) {}
    double lo;
    double hi;
};

/// Adaptive composite Simpson on [a, b] to absolute tolerance tol.
/// Throws QuadratureError with the offending panel when the recursion
/// depth limit is hit before the tolerance is met.
double adaptive_simpson(const RealFn& f, double a, double b, double tol,
                        int max_depth = 48);

/// Gauss-Legendre nodes and weights on [-1, 1], computed by Newton
/// iteration on the Legendre recurrence and cached per order.
struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};
const GaussRule& gauss_legendre(int n);

/// Fixed n-point Gauss-Legendre on [a, b].
double gauss_panel(const RealFn& f, double a, double b, int n);

/// Composite Gauss-Legendre: `panels` equal panels of n points each.
double composite_gauss(const RealFn& f, double a, double b, int panels, int n);

}  // namespace zint
