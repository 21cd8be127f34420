#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace valor {

// Axis-aligned box in image coordinates, origin top-left, half-open real
// rectangle [x1,x2) x [y1,y2). No pixel-grid +1 corrections anywhere.
struct BBox {
    double x1 = 0.0;
    double y1 = 0.0;
    double x2 = 0.0;
    double y2 = 0.0;

    bool valid() const {
        return std::isfinite(x1) && std::isfinite(y1) && std::isfinite(x2) &&
               std::isfinite(y2) && x1 >= 0.0 && y1 >= 0.0 && x1 < x2 && y1 < y2;
    }
};

struct InvalidBBox : std::runtime_error {
    explicit InvalidBBox(const std::string& msg) : std::runtime_error(msg) {}
};

namespace geometry {

void require_valid(const BBox& b);

double area(const BBox& b);

// Intersection over union; 0 for disjoint boxes.
double iou(const BBox& a, const BBox& b);

// Fraction of `inner` covered by `outer`: intersection / area(inner).
double containment(const BBox& inner, const BBox& outer);

struct Point {
    double x = 0.0;
    double y = 0.0;
};

Point center(const BBox& b);

// 2D pixel extent scaled by metric depth. Relative quantity: callers rescale
// it against a known reference before reading it as meters.
double pseudo3d_extent(double pixel_extent, double depth_m);

}  // namespace geometry
}  // namespace valor
