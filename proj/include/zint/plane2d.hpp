#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "zint/evaluator.hpp"
#include "zint/termination.hpp"

namespace zint {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
    double norm() const { return std::hypot(x, y); }
    bool operator==(const Vec2&) const = default;
};

/// Compactly supported plane measure of total mass -1: point masses plus
/// uniform disks.  This closure keeps the smoothed indicator exactly
/// computable through lens areas; combining two disk kernels leaves it,
/// so that combination is rejected.
struct Kernel2D {
    struct PointMass {
        Vec2 offset;
        double weight = 0.0;
    };
    struct Disk {
        Vec2 center;
        double radius = 0.0;
        double density = 0.0;
    };

    std::vector<PointMass> atoms;
    std::vector<Disk> disks;
    double support_radius = 0.0;

    double mass() const;
};

Kernel2D point_kernel();
Kernel2D pair_kernel(Vec2 offset);
Kernel2D disk_kernel(double radius);

ValidationReport validate2d(const Kernel2D& k, double tol = 1e-10);

enum class FamilyKind { circle, square, offset_circle };

/// Growing indicator regions: origin-centered circles or squares, or
/// circles about a fixed offset.  size(b) = scale * b; the inscribed
/// radius grows without bound in every case.
struct CurveFamily {
    FamilyKind kind = FamilyKind::circle;
    Vec2 offset;       // used by offset_circle only
    double scale = 1.0;

    double size(double b) const { return scale * b; }
    Vec2 center() const { return kind == FamilyKind::offset_circle ? offset : Vec2{}; }
    bool contains(Vec2 r, double b) const;
    double inscribed_radius(double b) const;
    double circumscribed_radius(double b) const;
    std::string describe() const;
};

CurveFamily circle_family(double scale = 1.0);
CurveFamily square_family(double scale = 1.0);
CurveFamily offset_circle_family(Vec2 offset, double scale = 1.0);

/// A plane integrand; set `radial` when f depends only on |r| so the
/// origin-centered circle evaluation can collapse to one dimension.
struct Field2D {
    std::function<double(Vec2)> value;
    std::function<double(double)> radial;  // optional: value(r) == radial(|r|)
    std::string label;
};

Field2D gaussian_field();
Field2D sin_r2_field();
Field2D constant_field(double c = 1.0);

/// Quadrature resolution for the plane integrals.  Radial panels are laid
/// out in t = rho^2, where phase-like integrands oscillate evenly.
struct QuadConfig2D {
    double radial_phase_step = 2.0;  // panel width in t = rho^2
    int radial_gl = 6;
    int angular_segments = 256;
    int angular_gl = 4;
    double cartesian_step = 0.5;  // panel width for square interiors
    int cartesian_gl = 4;
};

struct Policy2D {
    double b_lo = 20.0;
    double b_hi = 40.0;
    int b_count = 16;
    int window = 6;
    double tol = 1e-6;         // per-family window spread
    double family_tol = 1e-2;  // cross-family agreement
    QuadConfig2D quad;

    std::vector<double> grid() const;
    LimitPolicy limit_policy() const;
};

/// Combined kernel -(k1 conv k2): point masses convolve exactly, a point
/// mass shifts a disk; disk-disk is not representable here and throws.
Kernel2D combine2d(const Kernel2D& k1, const Kernel2D& k2);

/// The smoothed indicator w(r, b): point masses sample the indicator,
/// disks contribute lens areas with the family interior.
double w_field(const Kernel2D& k, const CurveFamily& fam, double b, Vec2 r);

/// Integral of f against w(., b), decomposed per kernel element.
double tail2d(const Field2D& f, const Kernel2D& k, const CurveFamily& fam, double b,
              const QuadConfig2D& quad);

std::vector<TailSample> tail2d_sweep_serial(const Field2D& f, const Kernel2D& k,
                                            const CurveFamily& fam,
                                            const std::vector<double>& grid,
                                            const QuadConfig2D& quad);
std::vector<TailSample> tail2d_sweep(const Field2D& f, const Kernel2D& k,
                                     const CurveFamily& fam, const std::vector<double>& grid,
                                     const QuadConfig2D& quad);

struct FamilyOutcome {
    std::string family;
    LimitReport report;
};

struct Result2D {
    std::optional<double> value;  // present only when every family agrees
    std::vector<FamilyOutcome> per_family;
    double agreement_spread = 0.0;
    bool all_converged = false;
};

/// Evaluates the plane integral under every family; a value is reported
/// only when each family's limit exists and they agree within tolerance.
Result2D evaluate2d(const Field2D& f, const Kernel2D& k,
                    const std::vector<CurveFamily>& fams, const Policy2D& policy);

std::string kernel_to_json_string(const Kernel2D& k, int indent = -1);
Kernel2D kernel_from_json_string(const std::string& text);
std::string family_to_json_string(const CurveFamily& fam, int indent = -1);
CurveFamily family_from_json_string(const std::string& text);

}  // namespace zint
