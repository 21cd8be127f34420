#include "valor/geometry.hpp"

#include <algorithm>

namespace valor::geometry {

void require_valid(const BBox& b) {
    if (!b.valid()) {
        throw InvalidBBox("invalid bbox [" + std::to_string(b.x1) + ", " +
                          std::to_string(b.y1) + ", " + std::to_string(b.x2) + ", " +
                          std::to_string(b.y2) + "]");
    }
}

double area(const BBox& b) {
    return (b.x2 - b.x1) * (b.y2 - b.y1);
}

static double intersection_area(const BBox& a, const BBox& b) {
    const double w = std::min(a.x2, b.x2) - std::max(a.x1, b.x1);
    const double h = std::min(a.y2, b.y2) - std::max(a.y1, b.y1);
    if (w <= 0.0 || h <= 0.0) return 0.0;
    return w * h;
}

double iou(const BBox& a, const BBox& b) {
    const double inter = intersection_area(a, b);
    if (inter <= 0.0) return 0.0;
    return inter / (area(a) + area(b) - inter);
}

double containment(const BBox& inner, const BBox& outer) {
    const double inter = intersection_area(inner, outer);
    if (inter <= 0.0) return 0.0;
    return inter / area(inner);
}

Point center(const BBox& b) {
    return {(b.x1 + b.x2) / 2.0, (b.y1 + b.y2) / 2.0};
}

double pseudo3d_extent(double pixel_extent, double depth_m) {
    if (!(pixel_extent > 0.0) || !(depth_m > 0.0)) {
        throw std::invalid_argument("pseudo3d_extent requires positive inputs");
    }
    return pixel_extent * depth_m;
}

}  // namespace valor::geometry
