#pragma once

#include <random>
#include <vector>

#include "zint/termination.hpp"

namespace zint::testing {

// Random valid termination derivative: a few atoms and polynomial
// segments with arbitrary signs, rescaled so the total mass is -1.
inline TerminationDerivative random_zd(std::mt19937& rng, bool allow_segments = true) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_int_distribution<int> natoms(1, 4);
    std::uniform_int_distribution<int> nsegs(0, 2);
    const double support = 0.5 + 3.0 * unit(rng);

    std::vector<Atom> atoms;
    const int na = natoms(rng);
    for (int i = 0; i < na; ++i)
        atoms.push_back({support * unit(rng), unit(rng) - 0.3});

    std::vector<DensitySegment> segments;
    if (allow_segments) {
        const int ns = nsegs(rng);
        double cursor = 0.0;
        for (int i = 0; i < ns; ++i) {
            const double lo = cursor + 0.05 * support * unit(rng);
            const double hi = lo + support * 0.3 * (0.2 + unit(rng));
            if (hi >= support) break;
            Poly coeffs(1 + static_cast<std::size_t>(3.0 * unit(rng)));
            for (auto& c : coeffs) c = 2.0 * unit(rng) - 1.0;
            segments.push_back({lo, hi, coeffs});
            cursor = hi;
        }
    }

    TerminationDerivative raw(atoms, segments, support);
    const double m = raw.mass();
    if (std::abs(m) < 0.05) {
        // nearly balanced draw; fall back to adjusting the first atom
        atoms[0].weight += -1.0 - m;
        return TerminationDerivative(atoms, segments, support);
    }
    const double scale = -1.0 / m;
    for (auto& a : atoms) a.weight *= scale;
    for (auto& s : segments)
        for (auto& c : s.coefficients) c *= scale;
    return TerminationDerivative(atoms, segments, support);
}

}  // namespace zint::testing
