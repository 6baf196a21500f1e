#include "zint/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace zint {

double circle_circle_area(double d, double r0, double r1) {
    if (r0 <= 0.0 || r1 <= 0.0) return 0.0;
    if (d >= r0 + r1) return 0.0;
    if (d <= std::abs(r0 - r1)) {
        const double rm = std::min(r0, r1);
        return M_PI * rm * rm;
    }
    auto clamp1 = [](double v) { return std::clamp(v, -1.0, 1.0); };
    const double a0 = std::acos(clamp1((d * d + r0 * r0 - r1 * r1) / (2.0 * d * r0)));
    const double a1 = std::acos(clamp1((d * d + r1 * r1 - r0 * r0) / (2.0 * d * r1)));
    const double k = (-d + r0 + r1) * (d + r0 - r1) * (d - r0 + r1) * (d + r0 + r1);
    return r0 * r0 * a0 + r1 * r1 * a1 - 0.5 * std::sqrt(std::max(0.0, k));
}

namespace {

// Antiderivative of the chord half-width of the unit-centered circle of
// radius r above the line y = h, evaluated at x.
double segment_antiderivative(double x, double h, double r) {
    const double s = std::sqrt(std::max(0.0, 1.0 - x * x / (r * r)));
    return 0.5 * (s * x * r + r * r * std::asin(std::clamp(x / r, -1.0, 1.0)) - 2.0 * h * x);
}

// Area between the circle of radius r centered at the origin and the strip
// x in [x0, x1] above the line y = h (h >= 0).
double area_above_line(double x0, double x1, double h, double r) {
    if (x0 > x1) std::swap(x0, x1);
    const double s = (h < r) ? std::sqrt(r * r - h * h) : 0.0;
    const double lo = std::clamp(x0, -s, s);
    const double hi = std::clamp(x1, -s, s);
    return segment_antiderivative(hi, h, r) - segment_antiderivative(lo, h, r);
}

double area_quadrant(double x0, double x1, double y0, double y1, double r) {
    if (y0 > y1) std::swap(y0, y1);
    if (y0 < 0.0) {
        if (y1 < 0.0) return area_quadrant(x0, x1, -y1, -y0, r);
        return area_quadrant(x0, x1, 0.0, -y0, r) + area_quadrant(x0, x1, 0.0, y1, r);
    }
    return area_above_line(x0, x1, y0, r) - area_above_line(x0, x1, y1, r);
}

}  // namespace

double circle_rect_area(double cx, double cy, double r, double x0, double x1, double y0,
                        double y1) {
    if (r <= 0.0) return 0.0;
    return area_quadrant(x0 - cx, x1 - cx, y0 - cy, y1 - cy, r);
}

}  // namespace zint
