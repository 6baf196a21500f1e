#pragma once

namespace zint {

/// Area of the intersection of two circles whose centers are `d` apart.
double circle_circle_area(double d, double r0, double r1);

/// Area of the intersection of the circle (cx, cy, r) with the axis-aligned
/// rectangle [x0, x1] x [y0, y1].
double circle_rect_area(double cx, double cy, double r, double x0, double x1, double y0,
                        double y1);

}  // namespace zint
