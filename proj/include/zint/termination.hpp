#pragma once

#include <string>
#include <utility>
#include <vector>

#include "zint/polynomial.hpp"

namespace zint {

/// A Dirac impulse in a termination derivative: signed mass `weight`
/// located at `position` inside the support [0, c].
struct Atom {
    double position = 0.0;
    double weight = 0.0;

    bool operator==(const Atom&) const = default;
};

/// One polynomial density piece of a termination derivative, with
/// coefficients in the local coordinate (x - lo).
struct DensitySegment {
    double lo = 0.0;
    double hi = 0.0;
    Poly coefficients;

    double value(double x) const { return poly_eval(coefficients, x - lo); }
    double mass() const { return poly_integral(coefficients, 0.0, hi - lo); }

    bool operator==(const DensitySegment&) const = default;
};

/// z'(x): finitely many atoms plus a piecewise-polynomial density on
/// [0, c].  Valid instances have total mass -1 and everything inside the
/// support; use validate() to check, since intentionally broken instances
/// are constructible.
class TerminationDerivative {
public:
    TerminationDerivative() = default;
    TerminationDerivative(std::vector<Atom> atoms, std::vector<DensitySegment> segments,
                          double support);

    const std::vector<Atom>& atoms() const { return atoms_; }
    const std::vector<DensitySegment>& segments() const { return segments_; }
    double support() const { return support_; }

    /// Sum of atom weights plus the integral of every density segment.
    double mass() const;

    /// Density value at x (atoms excluded).
    double density(double x) const;

    /// Cumulative mass on (-infinity, x]; atoms at exactly x count fully.
    double cumulative(double x) const;

    bool operator==(const TerminationDerivative&) const = default;

private:
    std::vector<Atom> atoms_;
    std::vector<DensitySegment> segments_;
    double support_ = 0.0;
};

struct ConditionCheck {
    std::string name;
    bool ok = false;
    std::string detail;
};

struct ValidationReport {
    double mass = 0.0;
    double support = 0.0;
    std::vector<ConditionCheck> conditions;
    bool passed = false;
};

/// z(x) reconstructed on demand from its derivative.
class TerminationFunction {
public:
    explicit TerminationFunction(TerminationDerivative zd) : derivative_(std::move(zd)) {}
    const TerminationDerivative& derivative() const { return derivative_; }
    double operator()(double x) const;

private:
    TerminationDerivative derivative_;
};

constexpr double kConstructorMassTol = 1e-12;
constexpr double kCombinedMassTol = 1e-9;

/// Atom-only termination derivative.  Support defaults to the largest
/// position (nominally 1 when all atoms sit at zero); a caller-supplied
/// support must cover every atom.  Rejects atom sets whose mass is not -1.
TerminationDerivative make_atoms(const std::vector<std::pair<double, double>>& entries,
                                 double support = 0.0);

/// Uniform density -1/width on [0, width].
TerminationDerivative make_box(double width);

/// The sharp-cutoff termination: a single atom of weight -1 at zero,
/// reproducing the conventional improper integral.
TerminationDerivative make_step();

/// Two equal atoms at 0 and spacing, weights -1/2 each.
TerminationDerivative make_pair(double spacing);

/// Three atoms at {0, spacing, 2*spacing} with weights {-1/4, -1/2, -1/4}.
TerminationDerivative make_triple(double spacing);

/// Two atoms at 0 and spacing with exponential weights
/// -e^{beta*spacing}/(1+e^{beta*spacing}) and -1/(1+e^{beta*spacing}).
TerminationDerivative make_exp_pair(double spacing, double beta);

ValidationReport validate(const TerminationDerivative& zd, double tol = kCombinedMassTol);

/// Combined termination derivative z' = -(z1' conv z2').  Support adds,
/// mass stays -1.  Atom pairs convolve exactly; segments convolve through
/// piecewise-polynomial arithmetic.
TerminationDerivative combine(const TerminationDerivative& z1,
                              const TerminationDerivative& z2);

/// z(x) = 1 + cumulative mass of z' on (-infinity, x].
double reconstruct_z(const TerminationDerivative& zd, double x);

std::string to_json_string(const TerminationDerivative& zd, int indent = -1);
TerminationDerivative termination_from_json_string(const std::string& text);

}  // namespace zint
