#include "doctest.h"

#include <random>

#include "valor/geometry.hpp"

using namespace valor;
using namespace valor::geometry;

TEST_CASE("area of basic boxes") {
    CHECK(area({0, 0, 10, 10}) == doctest::Approx(100.0));
    CHECK(area({10, 20, 30, 60}) == doctest::Approx(800.0));
    CHECK(area({5, 5, 6, 6}) > 0.0);
}

TEST_CASE("iou identical, disjoint, partial") {
    const BBox a{0, 0, 10, 10};
    CHECK(iou(a, a) == doctest::Approx(1.0));
    CHECK(iou(a, {20, 20, 30, 30}) == 0.0);
    // overlap 50, union 150
    CHECK(iou(a, {5, 0, 15, 10}) == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("iou symmetry and range on random boxes") {
    std::mt19937_64 rng(7);
    auto random_box = [&]() {
        std::uniform_real_distribution<double> d(0.0, 100.0);
        double x1 = d(rng), y1 = d(rng);
        return BBox{x1, y1, x1 + 1.0 + d(rng), y1 + 1.0 + d(rng)};
    };
    for (int i = 0; i < 500; ++i) {
        const BBox a = random_box();
        const BBox b = random_box();
        const double ab = iou(a, b);
        CHECK(ab == doctest::Approx(iou(b, a)).epsilon(1e-12));
        CHECK(ab >= 0.0);
        CHECK(ab <= 1.0);
    }
}

TEST_CASE("containment") {
    CHECK(containment({2, 2, 4, 4}, {0, 0, 10, 10}) == doctest::Approx(1.0));
    CHECK(containment({0, 0, 2, 2}, {5, 5, 8, 8}) == 0.0);
    // inner 10x10, half inside outer
    CHECK(containment({0, 0, 10, 10}, {5, 0, 20, 10}) == doctest::Approx(0.5));
}

TEST_CASE("containment is 1 iff inner inside outer") {
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> d(0.0, 50.0);
    for (int i = 0; i < 200; ++i) {
        const double x1 = d(rng), y1 = d(rng);
        const BBox inner{x1, y1, x1 + 1 + d(rng) / 10, y1 + 1 + d(rng) / 10};
        const BBox outer{x1 - 1, y1 - 1, inner.x2 + 1, inner.y2 + 1};
        CHECK(containment(inner, outer) == doctest::Approx(1.0).epsilon(1e-9));
    }
}

TEST_CASE("center") {
    auto c = center({0, 0, 10, 10});
    CHECK(c.x == doctest::Approx(5.0));
    CHECK(c.y == doctest::Approx(5.0));
    c = center({0, 100, 50, 200});
    CHECK(c.x == doctest::Approx(25.0));
    CHECK(c.y == doctest::Approx(150.0));
}

TEST_CASE("center lies inside the box") {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> d(0.0, 100.0);
    for (int i = 0; i < 200; ++i) {
        const double x1 = d(rng), y1 = d(rng);
        const BBox b{x1, y1, x1 + 0.5 + d(rng), y1 + 0.5 + d(rng)};
        const auto c = center(b);
        CHECK(c.x > b.x1);
        CHECK(c.x < b.x2);
        CHECK(c.y > b.y1);
        CHECK(c.y < b.y2);
    }
}

TEST_CASE("pseudo3d extent") {
    CHECK(pseudo3d_extent(100.0, 2.0) == doctest::Approx(200.0));
    CHECK(pseudo3d_extent(60.0, 3.0) == doctest::Approx(180.0));
    CHECK(pseudo3d_extent(10.0, 4.0) == doctest::Approx(2.0 * pseudo3d_extent(10.0, 2.0)));
    CHECK_THROWS_AS(pseudo3d_extent(0.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(pseudo3d_extent(1.0, -2.0), std::invalid_argument);
}

TEST_CASE("bbox validity") {
    CHECK(BBox{0, 0, 1, 1}.valid());
    CHECK_FALSE(BBox{1, 0, 1, 1}.valid());   // x1 == x2
    CHECK_FALSE(BBox{-1, 0, 1, 1}.valid());  // negative
    CHECK_FALSE(BBox{0, 5, 1, 4}.valid());   // y inverted
}
