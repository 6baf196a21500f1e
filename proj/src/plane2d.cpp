#include "zint/plane2d.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "zint/geometry.hpp"
#include "zint/quadrature.hpp"

namespace zint {

double Kernel2D::mass() const {
    double m = 0.0;
    for (const auto& a : atoms) m += a.weight;
    for (const auto& d : disks) m += d.density * M_PI * d.radius * d.radius;
    return m;
}

Kernel2D point_kernel() {
    Kernel2D k;
    k.atoms.push_back({{0.0, 0.0}, -1.0});
    k.support_radius = 1.0;  // nominal; the point mass sits at the origin
    return k;
}

Kernel2D pair_kernel(Vec2 offset) {
    Kernel2D k;
    k.atoms.push_back({{0.0, 0.0}, -0.5});
    k.atoms.push_back({offset, -0.5});
    k.support_radius = std::max(1.0, offset.norm());
    return k;
}

Kernel2D disk_kernel(double radius) {
    if (!(radius > 0.0)) throw std::invalid_argument("disk_kernel: radius must be positive");
    Kernel2D k;
    k.disks.push_back({{0.0, 0.0}, radius, -1.0 / (M_PI * radius * radius)});
    k.support_radius = radius;
    return k;
}

ValidationReport validate2d(const Kernel2D& k, double tol) {
    ValidationReport rep;
    rep.mass = k.mass();
    rep.support = k.support_radius;

    auto add = [&rep](std::string name, bool ok, std::string detail) {
        rep.conditions.push_back({std::move(name), ok, std::move(detail)});
    };
    {
        std::ostringstream os;
        os << "mass " << rep.mass;
        add("unit negative mass", std::abs(rep.mass + 1.0) <= tol, os.str());
    }
    add("positive support", k.support_radius > 0.0, "");

    bool inside = true;
    bool finite = true;
    for (const auto& a : k.atoms) {
        if (a.offset.norm() > k.support_radius + 1e-12) inside = false;
        if (!std::isfinite(a.offset.x) || !std::isfinite(a.offset.y) ||
            !std::isfinite(a.weight))
            finite = false;
    }
    for (const auto& d : k.disks) {
        if (d.center.norm() + d.radius > k.support_radius + 1e-12) inside = false;
        if (!(d.radius > 0.0)) finite = false;
        if (!std::isfinite(d.density)) finite = false;
    }
    add("support respected", inside, inside ? "" : "element outside the support circle");
    add("finite", finite, finite ? "" : "non-finite value");
    add("non-degenerate", !(k.atoms.empty() && k.disks.empty()), "");

    rep.passed = true;
    for (const auto& c : rep.conditions) rep.passed = rep.passed && c.ok;
    return rep;
}

bool CurveFamily::contains(Vec2 r, double b) const {
    const double s = size(b);
    switch (kind) {
        case FamilyKind::circle: return r.norm() <= s;
        case FamilyKind::square: return std::max(std::abs(r.x), std::abs(r.y)) <= s;
        case FamilyKind::offset_circle: return (r - offset).norm() <= s;
    }
    return false;
}

double CurveFamily::inscribed_radius(double b) const {
    const double s = size(b);
    return kind == FamilyKind::offset_circle ? s - offset.norm() : s;
}

double CurveFamily::circumscribed_radius(double b) const {
    const double s = size(b);
    switch (kind) {
        case FamilyKind::circle: return s;
        case FamilyKind::square: return s * std::sqrt(2.0);
        case FamilyKind::offset_circle: return s + offset.norm();
    }
    return s;
}

std::string CurveFamily::describe() const {
    std::ostringstream os;
    switch (kind) {
        case FamilyKind::circle: os << "circle"; break;
        case FamilyKind::square: os << "square"; break;
        case FamilyKind::offset_circle:
            os << "offset_circle(" << offset.x << "," << offset.y << ")";
            break;
    }
    if (scale != 1.0) os << " x" << scale;
    return os.str();
}

CurveFamily circle_family(double scale) { return {FamilyKind::circle, {}, scale}; }
CurveFamily square_family(double scale) { return {FamilyKind::square, {}, scale}; }
CurveFamily offset_circle_family(Vec2 offset, double scale) {
    return {FamilyKind::offset_circle, offset, scale};
}

Field2D gaussian_field() {
    Field2D f;
    f.label = "gaussian";
    f.value = [](Vec2 r) { return std::exp(-(r.x * r.x + r.y * r.y)); };
    f.radial = [](double rho) { return std::exp(-rho * rho); };
    return f;
}

Field2D sin_r2_field() {
    Field2D f;
    f.label = "sin_r2";
    f.value = [](Vec2 r) { return std::sin(r.x * r.x + r.y * r.y); };
    f.radial = [](double rho) { return std::sin(rho * rho); };
    return f;
}

Field2D constant_field(double c) {
    Field2D f;
    f.label = "constant";
    f.value = [c](Vec2) { return c; };
    f.radial = [c](double) { return c; };
    return f;
}

std::vector<double> Policy2D::grid() const {
    // Step kept incommensurate with unit periods, same aliasing concern as
    // the one-dimensional grid.
    const double phi = 0.6180339887498949;
    const double step = (b_hi - b_lo) / (static_cast<double>(b_count - 1) + phi - 0.5);
    std::vector<double> g(static_cast<std::size_t>(b_count));
    for (int k = 0; k < b_count; ++k) g[static_cast<std::size_t>(k)] = b_lo + k * step;
    return g;
}

LimitPolicy Policy2D::limit_policy() const {
    LimitPolicy p;
    p.b_start = b_lo;
    p.b_count = b_count;
    const double phi = 0.6180339887498949;
    p.b_step = (b_hi - b_lo) / (static_cast<double>(b_count - 1) + phi - 0.5);
    p.window = window;
    p.tol = tol;
    return p;
}

Kernel2D combine2d(const Kernel2D& k1, const Kernel2D& k2) {
    const ValidationReport v1 = validate2d(k1);
    const ValidationReport v2 = validate2d(k2);
    if (!v1.passed || !v2.passed)
        throw std::invalid_argument("combine2d: invalid kernel");
    if (!k1.disks.empty() && !k2.disks.empty())
        throw std::invalid_argument(
            "combine2d: disk-disk combination is not representable in this kernel closure");

    Kernel2D out;
    out.support_radius = k1.support_radius + k2.support_radius;
    const double eps = 1e-12 * (1.0 + out.support_radius);

    for (const auto& a : k1.atoms)
        for (const auto& b : k2.atoms) {
            const Vec2 pos = a.offset + b.offset;
            bool merged = false;
            for (auto& existing : out.atoms)
                if ((existing.offset - pos).norm() <= eps) {
                    existing.weight += -(a.weight * b.weight);
                    merged = true;
                    break;
                }
            if (!merged) out.atoms.push_back({pos, -(a.weight * b.weight)});
        }
    auto shift_disks = [&out](const std::vector<Kernel2D::PointMass>& atoms,
                              const std::vector<Kernel2D::Disk>& disks) {
        for (const auto& a : atoms)
            for (const auto& d : disks)
                out.disks.push_back({d.center + a.offset, d.radius, -(a.weight * d.density)});
    };
    shift_disks(k1.atoms, k2.disks);
    shift_disks(k2.atoms, k1.disks);
    return out;
}

namespace {

// Area of the intersection of the disk (c, rho) with the set of points q
// such that (r - q) lies inside the family curve at parameter b.  That set
// is the reflected interior translated to r; all three families are
// centrally symmetric, so it is the interior re-centered at r - center.
double overlap_with_shifted_interior(const CurveFamily& fam, double b, Vec2 rel, Vec2 c,
                                     double rho) {
    const double s = fam.size(b);
    if (fam.kind == FamilyKind::square) {
        return circle_rect_area(c.x, c.y, rho, rel.x - s, rel.x + s, rel.y - s, rel.y + s);
    }
    return circle_circle_area((rel - c).norm(), rho, s);
}

struct RadialBreaks {
    std::vector<double> t;  // panel boundaries in t = rho^2
};

RadialBreaks radial_panels(double t_max, const std::vector<double>& kinks, double dt) {
    RadialBreaks rb;
    std::vector<double> marks{0.0, t_max};
    for (double k : kinks)
        if (k > 0.0 && k < t_max) marks.push_back(k);
    std::sort(marks.begin(), marks.end());
    marks.erase(std::unique(marks.begin(), marks.end()), marks.end());
    for (std::size_t i = 0; i + 1 < marks.size(); ++i) {
        const double lo = marks[i], hi = marks[i + 1];
        const int n = std::max(1, static_cast<int>(std::ceil((hi - lo) / dt)));
        for (int k = 0; k < n; ++k) rb.t.push_back(lo + (hi - lo) * k / n);
    }
    rb.t.push_back(t_max);
    return rb;
}

// Integral of g(rho) * 2 pi rho over [0, sqrt(t_max)] as pi * int g(sqrt(t)) dt.
double radial_integral(const std::function<double(double)>& g, double t_max,
                       const std::vector<double>& kinks, const QuadConfig2D& quad) {
    const RadialBreaks rb = radial_panels(t_max, kinks, quad.radial_phase_step);
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < rb.t.size(); ++i)
        acc += gauss_panel([&](double t) { return g(std::sqrt(t)); }, rb.t[i], rb.t[i + 1],
                           quad.radial_gl);
    return M_PI * acc;
}

// Mean of g over the circle of radius delta about m, times 2 pi delta,
// integrated radially: int g over the plane in polar around m.
double polar_integral(const std::function<double(Vec2)>& g, Vec2 m, double t_max,
                      const std::vector<double>& kinks,
                      const std::function<double(double)>& radial_weight,
                      const QuadConfig2D& quad) {
    const RadialBreaks rb = radial_panels(t_max, kinks, quad.radial_phase_step);
    const GaussRule& arule = gauss_legendre(quad.angular_gl);
    const double seg = 2.0 * M_PI / quad.angular_segments;

    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < rb.t.size(); ++i) {
        acc += gauss_panel(
            [&](double t) {
                const double delta = std::sqrt(t);
                const double w = radial_weight ? radial_weight(delta) : 1.0;
                if (w == 0.0) return 0.0;
                double ang = 0.0;
                for (int sgm = 0; sgm < quad.angular_segments; ++sgm) {
                    const double th0 = sgm * seg;
                    for (int j = 0; j < quad.angular_gl; ++j) {
                        const double th = th0 + 0.5 * seg * (1.0 + arule.nodes[j]);
                        ang += arule.weights[j] *
                               g({m.x + delta * std::cos(th), m.y + delta * std::sin(th)});
                    }
                }
                ang *= 0.5 * seg;
                return w * ang;
            },
            rb.t[i], rb.t[i + 1], quad.radial_gl);
    }
    return 0.5 * acc;  // d(rho^2) = 2 rho d rho
}

double cartesian_integral(const std::function<double(Vec2)>& g, double x0, double x1,
                          double y0, double y1, const QuadConfig2D& quad) {
    const GaussRule& rule = gauss_legendre(quad.cartesian_gl);
    const int nx = std::max(1, static_cast<int>(std::ceil((x1 - x0) / quad.cartesian_step)));
    const int ny = std::max(1, static_cast<int>(std::ceil((y1 - y0) / quad.cartesian_step)));
    const double hx = (x1 - x0) / nx;
    const double hy = (y1 - y0) / ny;
    double acc = 0.0;
    for (int ix = 0; ix < nx; ++ix) {
        const double cx = x0 + (ix + 0.5) * hx;
        for (int iy = 0; iy < ny; ++iy) {
            const double cy = y0 + (iy + 0.5) * hy;
            double cell = 0.0;
            for (int i = 0; i < quad.cartesian_gl; ++i)
                for (int j = 0; j < quad.cartesian_gl; ++j)
                    cell += rule.weights[i] * rule.weights[j] *
                            g({cx + 0.5 * hx * rule.nodes[i], cy + 0.5 * hy * rule.nodes[j]});
            acc += cell * 0.25 * hx * hy;
        }
    }
    return acc;
}

bool kernel_is_radial(const Kernel2D& k) {
    for (const auto& a : k.atoms)
        if (a.offset.norm() > 1e-12) return false;
    for (const auto& d : k.disks)
        if (d.center.norm() > 1e-12) return false;
    return true;
}

}  // namespace

double w_field(const Kernel2D& k, const CurveFamily& fam, double b, Vec2 r) {
    const Vec2 rel = r - fam.center();
    double acc = 0.0;
    for (const auto& a : k.atoms)
        acc += -a.weight * (fam.contains(r - a.offset, b) ? 1.0 : 0.0);
    for (const auto& d : k.disks)
        acc += -d.density * overlap_with_shifted_interior(fam, b, rel, d.center, d.radius);
    return acc;
}

double tail2d(const Field2D& f, const Kernel2D& k, const CurveFamily& fam, double b,
              const QuadConfig2D& quad) {
    if (!f.value && !f.radial) throw std::invalid_argument("tail2d: empty integrand");
    const double s = fam.size(b);

    // Radial fast path: radial f, origin-centered circle, radial kernel.
    if (f.radial && fam.kind == FamilyKind::circle && kernel_is_radial(k)) {
        double atom_weight = 0.0;
        for (const auto& a : k.atoms) atom_weight += a.weight;
        std::vector<double> kinks{s * s};
        for (const auto& d : k.disks) {
            kinks.push_back((s - d.radius) * (s - d.radius));
            kinks.push_back((s + d.radius) * (s + d.radius));
        }
        const double rho_max = s + k.support_radius;
        auto wbar = [&](double rho) {
            double w = rho <= s ? -atom_weight : 0.0;
            for (const auto& d : k.disks)
                w += -d.density * circle_circle_area(rho, d.radius, s);
            return w;
        };
        return radial_integral([&](double rho) { return f.radial(rho) * wbar(rho); },
                               rho_max * rho_max, kinks, quad);
    }

    const std::function<double(Vec2)> fv =
        f.value ? f.value : [g = f.radial](Vec2 r) { return g(r.norm()); };

    double acc = 0.0;
    for (const auto& a : k.atoms) {
        // -(weight) * integral of f over the interior shifted by the offset
        if (fam.kind == FamilyKind::square) {
            acc += -a.weight * cartesian_integral(fv, a.offset.x - s, a.offset.x + s,
                                                  a.offset.y - s, a.offset.y + s, quad);
        } else {
            const Vec2 m = fam.center() + a.offset;
            acc += -a.weight * polar_integral(fv, m, s * s, {}, nullptr, quad);
        }
    }
    for (const auto& d : k.disks) {
        if (fam.kind == FamilyKind::square) {
            const double pad = d.radius;
            acc += -d.density *
                   cartesian_integral(
                       [&](Vec2 r) {
                           return fv(r) * circle_rect_area(d.center.x, d.center.y, d.radius,
                                                           r.x - s, r.x + s, r.y - s,
                                                           r.y + s);
                       },
                       -s - pad + d.center.x, s + pad + d.center.x, -s - pad + d.center.y,
                       s + pad + d.center.y, quad);
        } else {
            // The lens area is radial about the family center plus the disk
            // center; integrate in polar coordinates around that point.
            const Vec2 m = fam.center() + d.center;
            const double delta_max = s + d.radius;
            const std::vector<double> kinks{(s - d.radius) * (s - d.radius), s * s};
            acc += -d.density *
                   polar_integral(
                       fv, m, delta_max * delta_max, kinks,
                       [&](double delta) { return circle_circle_area(delta, d.radius, s); },
                       quad);
        }
    }
    return acc;
}

std::vector<TailSample> tail2d_sweep_serial(const Field2D& f, const Kernel2D& k,
                                            const CurveFamily& fam,
                                            const std::vector<double>& grid,
                                            const QuadConfig2D& quad) {
    std::vector<TailSample> out(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i)
        out[i] = {grid[i], tail2d(f, k, fam, grid[i], quad)};
    return out;
}

std::vector<TailSample> tail2d_sweep(const Field2D& f, const Kernel2D& k,
                                     const CurveFamily& fam, const std::vector<double>& grid,
                                     const QuadConfig2D& quad) {
    std::vector<TailSample> out(grid.size());
    std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic)
    for (long i = 0; i < static_cast<long>(grid.size()); ++i) {
        try {
            const std::size_t idx = static_cast<std::size_t>(i);
            out[idx] = {grid[idx], tail2d(f, k, fam, grid[idx], quad)};
        } catch (...) {
#pragma omp critical
            if (!failure) failure = std::current_exception();
        }
    }
    if (failure) std::rethrow_exception(failure);
    return out;
}

Result2D evaluate2d(const Field2D& f, const Kernel2D& k,
                    const std::vector<CurveFamily>& fams, const Policy2D& policy) {
    if (fams.size() < 2)
        throw std::invalid_argument("evaluate2d: need at least two curve families");
    bool has_circle = false, has_other = false;
    for (const auto& fam : fams) {
        if (fam.kind == FamilyKind::circle) has_circle = true;
        if (fam.kind != FamilyKind::circle) has_other = true;
    }
    if (!has_circle || !has_other)
        throw std::invalid_argument(
            "evaluate2d: families must include a circle and a square or offset circle");
    const ValidationReport vr = validate2d(k);
    if (!vr.passed) throw std::invalid_argument("evaluate2d: invalid kernel");

    Result2D res;
    const std::vector<double> grid = policy.grid();
    const LimitPolicy lp = policy.limit_policy();

    for (const auto& fam : fams) {
        LimitReport rep = detect_limit(tail2d_sweep(f, k, fam, grid, policy.quad), lp);
        res.per_family.push_back({fam.describe(), std::move(rep)});
    }

    res.all_converged = true;
    double lo = 0.0, hi = 0.0, sum = 0.0;
    int n = 0;
    for (const auto& fo : res.per_family) {
        if (!fo.report.limit) {
            res.all_converged = false;
            continue;
        }
        const double v = *fo.report.limit;
        if (n == 0) lo = hi = v;
        lo = std::min(lo, v);
        hi = std::max(hi, v);
        sum += v;
        ++n;
    }
    res.agreement_spread = n > 0 ? hi - lo : 0.0;
    if (res.all_converged && res.agreement_spread <= policy.family_tol)
        res.value = sum / n;
    return res;
}

std::string kernel_to_json_string(const Kernel2D& k, int indent) {
    nlohmann::json j;
    j["support_radius"] = k.support_radius;
    j["atoms"] = nlohmann::json::array();
    for (const auto& a : k.atoms)
        j["atoms"].push_back({{"pos", {a.offset.x, a.offset.y}}, {"w", a.weight}});
    j["disks"] = nlohmann::json::array();
    for (const auto& d : k.disks)
        j["disks"].push_back({{"center", {d.center.x, d.center.y}},
                              {"radius", d.radius},
                              {"density", d.density}});
    return j.dump(indent);
}

Kernel2D kernel_from_json_string(const std::string& text) {
    const nlohmann::json j = nlohmann::json::parse(text);
    Kernel2D k;
    k.support_radius = j.at("support_radius").get<double>();
    for (const auto& a : j.value("atoms", nlohmann::json::array()))
        k.atoms.push_back({{a.at("pos")[0].get<double>(), a.at("pos")[1].get<double>()},
                           a.at("w").get<double>()});
    for (const auto& d : j.value("disks", nlohmann::json::array()))
        k.disks.push_back(
            {{d.at("center")[0].get<double>(), d.at("center")[1].get<double>()},
             d.at("radius").get<double>(),
             d.at("density").get<double>()});
    return k;
}

std::string family_to_json_string(const CurveFamily& fam, int indent) {
    nlohmann::json j;
    switch (fam.kind) {
        case FamilyKind::circle: j["kind"] = "circle"; break;
        case FamilyKind::square: j["kind"] = "square"; break;
        case FamilyKind::offset_circle: j["kind"] = "offset_circle"; break;
    }
    j["offset"] = {fam.offset.x, fam.offset.y};
    j["scale"] = fam.scale;
    return j.dump(indent);
}

CurveFamily family_from_json_string(const std::string& text) {
    const nlohmann::json j = nlohmann::json::parse(text);
    CurveFamily fam;
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "circle")
        fam.kind = FamilyKind::circle;
    else if (kind == "square")
        fam.kind = FamilyKind::square;
    else if (kind == "offset_circle")
        fam.kind = FamilyKind::offset_circle;
    else
        throw std::invalid_argument("family_from_json_string: unknown kind '" + kind + "'");
    if (j.contains("offset"))
        fam.offset = {j["offset"][0].get<double>(), j["offset"][1].get<double>()};
    fam.scale = j.value("scale", 1.0);
    return fam;
}

}  // namespace zint
