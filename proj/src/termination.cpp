#include "zint/termination.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace zint {

TerminationDerivative::TerminationDerivative(std::vector<Atom> atoms,
                                             std::vector<DensitySegment> segments,
                                             double support)
    : atoms_(std::move(atoms)), segments_(std::move(segments)), support_(support) {
    std::sort(atoms_.begin(), atoms_.end(),
              [](const Atom& a, const Atom& b) { return a.position < b.position; });
    std::sort(segments_.begin(), segments_.end(),
              [](const DensitySegment& a, const DensitySegment& b) { return a.lo < b.lo; });
}

double TerminationDerivative::mass() const {
    double m = 0.0;
    for (const Atom& a : atoms_) m += a.weight;
    for (const DensitySegment& s : segments_) m += s.mass();
    return m;
}

double TerminationDerivative::density(double x) const {
    for (const DensitySegment& s : segments_)
        if (s.lo <= x && x < s.hi) return s.value(x);
    return 0.0;
}

double TerminationDerivative::cumulative(double x) const {
    double m = 0.0;
    for (const Atom& a : atoms_)
        if (a.position <= x) m += a.weight;
    for (const DensitySegment& s : segments_) {
        if (x <= s.lo) continue;
        const double upper = std::min(x, s.hi);
        m += poly_integral(s.coefficients, 0.0, upper - s.lo);
    }
    return m;
}

double TerminationFunction::operator()(double x) const { return reconstruct_z(derivative_, x); }

TerminationDerivative make_atoms(const std::vector<std::pair<double, double>>& entries,
                                 double support) {
    if (entries.empty()) throw std::invalid_argument("make_atoms: no entries");
    double mass = 0.0;
    double max_pos = 0.0;
    std::vector<Atom> atoms;
    atoms.reserve(entries.size());
    for (const auto& [pos, w] : entries) {
        if (pos < 0.0) throw std::invalid_argument("make_atoms: negative position");
        if (!std::isfinite(pos) || !std::isfinite(w))
            throw std::invalid_argument("make_atoms: non-finite entry");
        atoms.push_back({pos, w});
        mass += w;
        max_pos = std::max(max_pos, pos);
    }
    if (std::abs(mass + 1.0) > kConstructorMassTol) {
        std::ostringstream os;
        os << "make_atoms: total mass " << mass << " is not -1";
        throw std::invalid_argument(os.str());
    }
    double c = support;
    if (c == 0.0) c = max_pos > 0.0 ? max_pos : 1.0;  // nominal support for atoms at zero
    if (c < max_pos) throw std::invalid_argument("make_atoms: support smaller than max position");
    return TerminationDerivative(std::move(atoms), {}, c);
}

TerminationDerivative make_box(double width) {
    if (!(width > 0.0)) throw std::invalid_argument("make_box: width must be positive");
    DensitySegment seg{0.0, width, Poly{-1.0 / width}};
    return TerminationDerivative({}, {seg}, width);
}

TerminationDerivative make_step() { return make_atoms({{0.0, -1.0}}); }

TerminationDerivative make_pair(double spacing) {
    if (!(spacing > 0.0)) throw std::invalid_argument("make_pair: spacing must be positive");
    return make_atoms({{0.0, -0.5}, {spacing, -0.5}});
}

TerminationDerivative make_triple(double spacing) {
    if (!(spacing > 0.0)) throw std::invalid_argument("make_triple: spacing must be positive");
    return make_atoms({{0.0, -0.25}, {spacing, -0.5}, {2.0 * spacing, -0.25}});
}

TerminationDerivative make_exp_pair(double spacing, double beta) {
    if (!(spacing > 0.0)) throw std::invalid_argument("make_exp_pair: spacing must be positive");
    const double e = std::exp(beta * spacing);
    const double denom = 1.0 + e;
    return TerminationDerivative({{0.0, -e / denom}, {spacing, -1.0 / denom}}, {}, spacing);
}

ValidationReport validate(const TerminationDerivative& zd, double tol) {
    ValidationReport rep;
    rep.mass = zd.mass();
    rep.support = zd.support();

    auto add = [&rep](std::string name, bool ok, std::string detail) {
        rep.conditions.push_back({std::move(name), ok, std::move(detail)});
    };

    {
        std::ostringstream os;
        os << "mass " << rep.mass;
        add("unit negative mass", std::abs(rep.mass + 1.0) <= tol, os.str());
    }
    add("positive support", zd.support() > 0.0, "");

    bool inside = true;
    bool finite = true;
    for (const Atom& a : zd.atoms()) {
        if (a.position < 0.0 || a.position > zd.support()) inside = false;
        if (!std::isfinite(a.position) || !std::isfinite(a.weight)) finite = false;
    }
    double prev_hi = 0.0;
    bool ordered = true;
    for (const DensitySegment& s : zd.segments()) {
        if (s.lo < 0.0 || s.hi > zd.support()) inside = false;
        if (!(s.lo < s.hi)) ordered = false;
        if (s.lo < prev_hi - 1e-15 * (1.0 + zd.support())) ordered = false;
        prev_hi = s.hi;
        for (double c : s.coefficients)
            if (!std::isfinite(c)) finite = false;
    }
    add("support respected", inside, inside ? "" : "element outside [0, c]");
    add("segments ordered", ordered, ordered ? "" : "overlapping or inverted segment");
    add("finite", finite, finite ? "" : "non-finite value");
    add("non-degenerate", !(zd.atoms().empty() && zd.segments().empty()), "");

    rep.passed = true;
    for (const auto& c : rep.conditions) rep.passed = rep.passed && c.ok;
    return rep;
}

namespace {

void require_valid(const TerminationDerivative& zd, const char* who) {
    const ValidationReport rep = validate(zd);
    if (!rep.passed) {
        std::ostringstream os;
        os << who << ": invalid termination derivative (";
        bool first = true;
        for (const auto& c : rep.conditions) {
            if (c.ok) continue;
            if (!first) os << "; ";
            os << c.name;
            if (!c.detail.empty()) os << ": " << c.detail;
            first = false;
        }
        os << ")";
        throw std::invalid_argument(os.str());
    }
}

}  // namespace

TerminationDerivative combine(const TerminationDerivative& z1,
                              const TerminationDerivative& z2) {
    require_valid(z1, "combine");
    require_valid(z2, "combine");

    const double c = z1.support() + z2.support();
    const double eps = 1e-12 * (1.0 + c);

    // atom x atom: impulse at summed positions, weight -(w1*w2)
    std::vector<Atom> atoms;
    for (const Atom& a : z1.atoms())
        for (const Atom& b : z2.atoms())
            atoms.push_back({a.position + b.position, -(a.weight * b.weight)});
    std::sort(atoms.begin(), atoms.end(),
              [](const Atom& a, const Atom& b) { return a.position < b.position; });
    std::vector<Atom> merged;
    for (const Atom& a : atoms) {
        if (!merged.empty() && std::abs(merged.back().position - a.position) <= eps)
            merged.back().weight += a.weight;
        else
            merged.push_back(a);
    }

    std::vector<PolyPiece> pieces;
    auto cross = [&pieces](const std::vector<Atom>& as,
                           const std::vector<DensitySegment>& segs) {
        // atom x segment: shifted segment scaled by -weight
        for (const Atom& a : as)
            for (const DensitySegment& s : segs)
                pieces.push_back({s.lo + a.position, s.hi + a.position,
                                  poly_scale(s.coefficients, -a.weight)});
    };
    cross(z1.atoms(), z2.segments());
    cross(z2.atoms(), z1.segments());

    for (const DensitySegment& s1 : z1.segments())
        for (const DensitySegment& s2 : z2.segments()) {
            auto conv = convolve_pieces({s1.lo, s1.hi, s1.coefficients},
                                        {s2.lo, s2.hi, s2.coefficients});
            for (auto& p : conv) {
                p.coeffs = poly_scale(p.coeffs, -1.0);
                pieces.push_back(std::move(p));
            }
        }

    std::vector<DensitySegment> segments;
    for (auto& p : consolidate_pieces(std::move(pieces), eps))
        segments.push_back({p.lo, p.hi, std::move(p.coeffs)});

    return TerminationDerivative(std::move(merged), std::move(segments), c);
}

double reconstruct_z(const TerminationDerivative& zd, double x) {
    return 1.0 + zd.cumulative(x);
}

std::string to_json_string(const TerminationDerivative& zd, int indent) {
    nlohmann::json j;
    j["support"] = zd.support();
    j["atoms"] = nlohmann::json::array();
    for (const Atom& a : zd.atoms()) j["atoms"].push_back({{"pos", a.position}, {"w", a.weight}});
    j["segments"] = nlohmann::json::array();
    for (const DensitySegment& s : zd.segments())
        j["segments"].push_back({{"lo", s.lo}, {"hi", s.hi}, {"coeffs", s.coefficients}});
    return j.dump(indent);
}

TerminationDerivative termination_from_json_string(const std::string& text) {
    const nlohmann::json j = nlohmann::json::parse(text);
    std::vector<Atom> atoms;
    for (const auto& a : j.value("atoms", nlohmann::json::array()))
        atoms.push_back({a.at("pos").get<double>(), a.at("w").get<double>()});
    std::vector<DensitySegment> segments;
    for (const auto& s : j.value("segments", nlohmann::json::array()))
        segments.push_back({s.at("lo").get<double>(), s.at("hi").get<double>(),
                            s.at("coeffs").get<Poly>()});
    return TerminationDerivative(std::move(atoms), std::move(segments),
                                 j.at("support").get<double>());
}

}  // namespace zint
