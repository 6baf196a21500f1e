#pragma once

#include <vector>

namespace zint {

// Dense univariate polynomial, coeffs[k] is the coefficient of t^k.
// Used for the density pieces of termination derivatives; degrees stay
// small (convolution adds degrees plus one), so dense vectors are fine.
using Poly = std::vector<double>;

double poly_eval(const Poly& p, double t);

Poly poly_add(const Poly& a, const Poly& b);
Poly poly_scale(const Poly& p, double s);
Poly poly_mul(const Poly& a, const Poly& b);

// Antiderivative with zero constant term.
Poly poly_integrate(const Poly& p);

// Definite integral over [lo, hi].
double poly_integral(const Poly& p, double lo, double hi);

// Rewrites p(t) as q(u) with t = u + shift, i.e. q(u) = p(u + shift).
Poly poly_shift(const Poly& p, double shift);

// Substitutes t = c0 + c1*u into p, returning a polynomial in u.
Poly poly_compose_linear(const Poly& p, double c0, double c1);

// Drops trailing coefficients below |eps|; keeps at least one term.
Poly poly_trim(Poly p, double eps = 0.0);

// Convolution of two polynomial pieces g1 on [a1,b1] and g2 on [a2,b2],
// each given in local coordinates (t - lo).  The result is the piecewise
// polynomial (g1 * g2)(x) = \int g1(t) g2(x - t) dt, returned as pieces
// in local coordinates covering [a1+a2, b1+b2].
struct PolyPiece {
    double lo = 0.0;
    double hi = 0.0;
    Poly coeffs;  // polynomial in (x - lo)

    double value(double x) const { return poly_eval(coeffs, x - lo); }
    double mass() const { return poly_integral(coeffs, 0.0, hi - lo); }
};

std::vector<PolyPiece> convolve_pieces(const PolyPiece& g1, const PolyPiece& g2);

// Merges overlapping pieces into a disjoint, sorted segmentation whose
// polynomials are the sums of all contributions covering each interval.
std::vector<PolyPiece> consolidate_pieces(std::vector<PolyPiece> pieces, double eps);

}  // namespace zint
