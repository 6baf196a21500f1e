#include "zint/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace zint {

double poly_eval(const Poly& p, double t) {
    double acc = 0.0;
    for (std::size_t i = p.size(); i-- > 0;) acc = acc * t + p[i];
    return acc;
}

Poly poly_add(const Poly& a, const Poly& b) {
    Poly out(std::max(a.size(), b.size()), 0.0);
    for (std::size_t i = 0; i < a.size(); ++i) out[i] += a[i];
    for (std::size_t i = 0; i < b.size(); ++i) out[i] += b[i];
    return out;
}

Poly poly_scale(const Poly& p, double s) {
    Poly out = p;
    for (double& c : out) c *= s;
    return out;
}

Poly poly_mul(const Poly& a, const Poly& b) {
    if (a.empty() || b.empty()) return {};
    Poly out(a.size() + b.size() - 1, 0.0);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
    return out;
}

Poly poly_integrate(const Poly& p) {
    Poly out(p.size() + 1, 0.0);
    for (std::size_t i = 0; i < p.size(); ++i) out[i + 1] = p[i] / static_cast<double>(i + 1);
    return out;
}

double poly_integral(const Poly& p, double lo, double hi) {
    const Poly P = poly_integrate(p);
    return poly_eval(P, hi) - poly_eval(P, lo);
}

Poly poly_shift(const Poly& p, double shift) {
    // Horner-style rebasing: evaluate p at (u + shift) symbolically.
    Poly out{0.0};
    for (std::size_t i = p.size(); i-- > 0;) {
        // out = out * (u + shift) + p[i]
        Poly next(out.size() + 1, 0.0);
        for (std::size_t k = 0; k < out.size(); ++k) {
            next[k + 1] += out[k];
            next[k] += out[k] * shift;
        }
        next[0] += p[i];
        out = std::move(next);
    }
    return out;
}

Poly poly_compose_linear(const Poly& p, double c0, double c1) {
    Poly out{0.0};
    const Poly lin{c0, c1};
    for (std::size_t i = p.size(); i-- > 0;) {
        out = poly_mul(out, lin);
        if (out.empty()) out = {0.0};
        out[0] += p[i];
    }
    return out;
}

Poly poly_trim(Poly p, double eps) {
    while (p.size() > 1 && std::abs(p.back()) <= eps) p.pop_back();
    if (p.empty()) p = {0.0};
    return p;
}

namespace {

// Bivariate polynomial in (t, x): coeffs[i][j] * t^i * x^j.
using Poly2 = std::vector<Poly>;

Poly2 poly2_mul_t(const Poly2& a, const Poly& f) {
    // multiply by f(t)
    Poly2 out(a.size() + f.size() - 1);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t k = 0; k < f.size(); ++k)
            out[i + k] = poly_add(out[i + k].empty() ? Poly{} : out[i + k],
                                  poly_scale(a[i], f[k]));
    for (auto& row : out)
        if (row.empty()) row = {0.0};
    return out;
}

Poly2 poly2_integrate_t(const Poly2& a) {
    Poly2 out(a.size() + 1);
    out[0] = {0.0};
    for (std::size_t i = 0; i < a.size(); ++i)
        out[i + 1] = poly_scale(a[i], 1.0 / static_cast<double>(i + 1));
    return out;
}

// Substitute t = c0 + c1*x into the bivariate polynomial, producing a
// univariate polynomial in x.
Poly poly2_subst_t_linear(const Poly2& a, double c0, double c1) {
    Poly out{0.0};
    Poly tpow{1.0};  // (c0 + c1 x)^i
    const Poly lin{c0, c1};
    for (std::size_t i = 0; i < a.size(); ++i) {
        out = poly_add(out, poly_mul(tpow, a[i]));
        tpow = poly_mul(tpow, lin);
    }
    return out;
}

}  // namespace

std::vector<PolyPiece> convolve_pieces(const PolyPiece& g1, const PolyPiece& g2) {
    // (g1 * g2)(x) = int_{max(a1, x-b2)}^{min(b1, x-a2)} g1(t) g2(x-t) dt
    // over x in [a1+a2, b1+b2], with interior breakpoints where the active
    // endpoint switches.
    const double a1 = g1.lo, b1 = g1.hi;
    const double a2 = g2.lo, b2 = g2.hi;

    // Integrand as a bivariate polynomial in (t, x).  g1 is a polynomial in
    // (t - a1); g2 in ((x - t) - a2).
    const Poly p1 = poly_shift(g1.coeffs, -a1);            // polynomial in t
    // g2((x - t) - a2): substitute u = x - t - a2 into g2's coefficients.
    // Build as bivariate: u = -t + (x - a2); powers of u expand over (t, x).
    Poly2 integrand{Poly{1.0}};
    {
        // represent g2 as polynomial in u, then u^k -> ((x - a2) - t)^k
        Poly2 acc;  // accumulating result
        Poly2 upow{Poly{1.0}};  // u^0 = 1
        // u as bivariate: coefficient of t^1 is -1, and in x: (x - a2)
        for (std::size_t k = 0; k < g2.coeffs.size(); ++k) {
            // acc += g2.coeffs[k] * upow
            if (acc.size() < upow.size()) acc.resize(upow.size(), Poly{0.0});
            for (std::size_t i = 0; i < upow.size(); ++i)
                acc[i] = poly_add(acc[i], poly_scale(upow[i], g2.coeffs[k]));
            // upow *= u, with u = (x - a2) - t
            Poly2 next(upow.size() + 1, Poly{0.0});
            for (std::size_t i = 0; i < upow.size(); ++i) {
                next[i] = poly_add(next[i], poly_mul(upow[i], Poly{-a2, 1.0}));
                next[i + 1] = poly_add(next[i + 1], poly_scale(upow[i], -1.0));
            }
            upow = std::move(next);
        }
        integrand = std::move(acc);
    }
    integrand = poly2_mul_t(integrand, p1);

    // Antiderivative in t.
    const Poly2 H = poly2_integrate_t(integrand);

    // Breakpoints in x.
    const double lo = a1 + a2, hi = b1 + b2;
    double m1 = a1 + b2, m2 = b1 + a2;
    if (m1 > m2) std::swap(m1, m2);

    std::vector<PolyPiece> out;
    auto emit = [&](double xlo, double xhi) {
        if (xhi - xlo <= 0.0) return;
        // Active t-limits on this piece are linear in x.
        // lower(x) = max(a1, x - b2), upper(x) = min(b1, x - a2).
        const double xmid = 0.5 * (xlo + xhi);
        double lo0, lo1, up0, up1;
        if (a1 >= xmid - b2) { lo0 = a1; lo1 = 0.0; } else { lo0 = -b2; lo1 = 1.0; }
        if (b1 <= xmid - a2) { up0 = b1; up1 = 0.0; } else { up0 = -a2; up1 = 1.0; }
        Poly piece = poly_add(poly2_subst_t_linear(H, up0, up1),
                              poly_scale(poly2_subst_t_linear(H, lo0, lo1), -1.0));
        // Rebase to local coordinate (x - xlo).
        piece = poly_shift(piece, xlo);
        out.push_back({xlo, xhi, poly_trim(std::move(piece), 0.0)});
    };

    emit(lo, m1);
    emit(m1, m2);
    emit(m2, hi);
    return out;
}

std::vector<PolyPiece> consolidate_pieces(std::vector<PolyPiece> pieces, double eps) {
    if (pieces.empty()) return pieces;

    std::vector<double> cuts;
    cuts.reserve(pieces.size() * 2);
    for (const auto& p : pieces) {
        cuts.push_back(p.lo);
        cuts.push_back(p.hi);
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end(),
                           [eps](double a, double b) { return std::abs(a - b) <= eps; }),
               cuts.end());

    std::vector<PolyPiece> out;
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
        const double lo = cuts[k], hi = cuts[k + 1];
        if (hi - lo <= eps) continue;
        const double mid = 0.5 * (lo + hi);
        Poly sum{0.0};
        bool covered = false;
        for (const auto& p : pieces) {
            if (p.lo - eps <= mid && mid <= p.hi + eps && p.hi > p.lo) {
                if (mid < p.lo || mid > p.hi) continue;
                // contribution in local coord (x - lo): p(x - p.lo) with x = u + lo
                sum = poly_add(sum, poly_shift(p.coeffs, lo - p.lo));
                covered = true;
            }
        }
        if (!covered) continue;
        sum = poly_trim(std::move(sum), 0.0);
        bool zero = true;
        for (double c : sum)
            if (c != 0.0) { zero = false; break; }
        if (zero) continue;
        out.push_back({lo, hi, std::move(sum)});
    }
    return out;
}

}  // namespace zint
