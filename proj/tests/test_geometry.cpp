#include <doctest.h>

#include <algorithm>
#include <random>

#include "hped/geometry.hpp"

using namespace hped;

namespace {

// Dense grid sampling of the open cell interior against the open disk.
bool sampled_overlap(const Circle& c, const Vec2& lo, const Vec2& hi) {
    constexpr int kSide = 100;
    for (int i = 0; i < kSide; ++i) {
        for (int j = 0; j < kSide; ++j) {
            const Vec2 q{lo.x + (hi.x - lo.x) * (i + 0.5) / kSide, lo.y + (hi.y - lo.y) * (j + 0.5) / kSide};
            if ((q - c.center).norm2() < c.radius * c.radius) return true;
        }
    }
    return false;
}

double box_distance(const Vec2& p, const Vec2& lo, const Vec2& hi) {
    const double dx = std::max({lo.x - p.x, 0.0, p.x - hi.x});
    const double dy = std::max({lo.y - p.y, 0.0, p.y - hi.y});
    return std::sqrt(dx * dx + dy * dy);
}

}  // namespace

TEST_CASE("point_in_polygon") {
    const Polygon sq = make_rect({0, 0}, {1, 1});
    CHECK(point_in_polygon(sq.centroid(), sq));
    CHECK_FALSE(point_in_polygon({2.0, 0.5}, sq));
    CHECK(point_in_polygon({0.5, 1.0}, sq));
    CHECK(point_in_polygon({0.0, 0.0}, sq));

    const Polygon tri({{0, 0}, {4, 0}, {0, 3}});
    CHECK(point_in_polygon(tri.centroid(), tri));
    CHECK(point_in_polygon({2.0, 1.5}, tri));
    CHECK_FALSE(point_in_polygon({2.1, 1.6}, tri));

    // Concave L-shape: notch is outside.
    const Polygon ell({{0, 0}, {2, 0}, {2, 1}, {1, 1}, {1, 2}, {0, 2}});
    CHECK(point_in_polygon({0.5, 1.5}, ell));
    CHECK_FALSE(point_in_polygon({1.5, 1.5}, ell));
}

TEST_CASE("polygon area, centroid, bounds") {
    const Polygon r = make_rect({1, 2}, {4, 4});
    CHECK(r.signed_area() == doctest::Approx(6.0));
    CHECK(r.centroid().x == doctest::Approx(2.5));
    CHECK(r.centroid().y == doctest::Approx(3.0));
    const auto [lo, hi] = r.bounds();
    CHECK(lo == Vec2{1, 2});
    CHECK(hi == Vec2{4, 4});
    Polygon cw = r;
    std::reverse(cw.vertices.begin(), cw.vertices.end());
    CHECK(cw.signed_area() == doctest::Approx(-6.0));
    CHECK(cw.area() == doctest::Approx(6.0));
}

TEST_CASE("wrap_angle") {
    CHECK(wrap_angle(0.0) == doctest::Approx(0.0));
    CHECK(wrap_angle(kPi) == doctest::Approx(kPi));
    CHECK(wrap_angle(-kPi) == doctest::Approx(kPi));
    CHECK(wrap_angle(3 * kPi) == doctest::Approx(kPi));
    CHECK(wrap_angle(2 * kPi + 0.5) == doctest::Approx(0.5));
}

TEST_CASE("segment distances") {
    CHECK(point_segment_distance({0, 1}, {-1, 0}, {1, 0}) == doctest::Approx(1.0));
    CHECK(point_segment_distance({3, 4}, {0, 0}, {0, 0}) == doctest::Approx(5.0));
    CHECK(point_segment_distance({2, 1}, {-1, 0}, {1, 0}) == doctest::Approx(std::sqrt(2.0)));
    CHECK(segment_segment_distance({0, 0}, {2, 2}, {0, 2}, {2, 0}) == doctest::Approx(0.0));
    CHECK(segment_segment_distance({0, 0}, {1, 0}, {0, 1}, {1, 1}) == doctest::Approx(1.0));
    CHECK(segments_properly_intersect({0, 0}, {2, 2}, {0, 2}, {2, 0}));
    CHECK_FALSE(segments_properly_intersect({0, 0}, {1, 1}, {1, 1}, {2, 0}));
    CHECK_FALSE(segments_properly_intersect({0, 0}, {2, 0}, {1, 0}, {3, 0}));

    const Polygon sq = make_rect({0, 0}, {1, 1});
    CHECK(point_polygon_distance({0.5, 0.5}, sq) == 0.0);
    CHECK(point_polygon_boundary_distance({0.5, 0.5}, sq) == doctest::Approx(0.5));
    CHECK(point_polygon_distance({2, 0.5}, sq) == doctest::Approx(1.0));
    CHECK(segment_polygon_distance({-1, 2}, {2, 2}, sq) == doctest::Approx(1.0));
    CHECK(segment_polygon_distance({-1, 0.5}, {2, 0.5}, sq) == 0.0);
}

TEST_CASE("clipping and intersection area") {
    const Polygon a = make_rect({0, 0}, {2, 2});
    const Polygon b = make_rect({1, 1}, {3, 3});
    CHECK(intersection_area_convex(a, b) == doctest::Approx(1.0));
    CHECK(intersection_area_convex(a, make_rect({5, 5}, {6, 6})) == doctest::Approx(0.0));
    CHECK(intersection_area_convex(a, make_rect({2, 0}, {3, 2})) == doctest::Approx(0.0));
    const Polygon tri({{0, 0}, {2, 0}, {0, 2}});
    CHECK(intersection_area_convex(tri, make_rect({0, 0}, {1, 1})) == doctest::Approx(1.0));
}

TEST_CASE("circle_cell_overlap boundary semantics") {
    const Polygon cell = make_rect({0, 0}, {0.46, 0.46});
    CHECK(circle_cell_overlap({{0.23, 0.23}, 0.23}, cell));
    // Tangent from outside is not an overlap.
    CHECK_FALSE(circle_cell_overlap({{0.69, 0.23}, 0.23}, cell));
    CHECK(circle_cell_overlap({{0.68, 0.23}, 0.23}, cell));
    // Corner tangency.
    const double d = 0.23 / std::sqrt(2.0);
    CHECK_FALSE(circle_cell_overlap({{0.46 + d, 0.46 + d}, 0.23}, cell));
    CHECK(circle_cell_overlap({{0.46 + d - 1e-6, 0.46 + d - 1e-6}, 0.23}, cell));
    CHECK_FALSE(circle_box_overlap({{0.69, 0.23}, 0.23}, {0, 0}, {0.46, 0.46}));
}

TEST_CASE("circle_cell_overlap agrees with point sampling on random pairs") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> pos(-1.0, 2.0), rad(0.05, 0.8), edge(0.2, 1.0);
    int checked = 0;
    for (int t = 0; t < 1000; ++t) {
        const double e = edge(rng);
        const Vec2 lo{pos(rng) * 0.2, pos(rng) * 0.2};
        const Vec2 hi{lo.x + e, lo.y + e};
        const Circle c{{pos(rng), pos(rng)}, rad(rng)};
        const double gap = box_distance(c.center, lo, hi) - c.radius;
        // Sampling resolves features coarser than one sample spacing only.
        if (std::abs(gap) < 0.02 * e) continue;
        const bool got = circle_cell_overlap(c, make_rect(lo, hi));
        CHECK(got == sampled_overlap(c, lo, hi));
        CHECK(got == circle_box_overlap(c, lo, hi));
        ++checked;
    }
    CHECK(checked > 900);
}

TEST_CASE("overlap predicates are translation invariant") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-3.0, 3.0), r(0.1, 1.5), ang(-kPi, kPi);
    for (int t = 0; t < 300; ++t) {
        const Vec2 shift{u(rng) * 10.0, u(rng) * 10.0};
        const Polygon cell = make_rect({0, 0}, {0.46, 0.46});
        const Polygon moved = make_rect(shift, shift + Vec2{0.46, 0.46});
        const Circle c{{u(rng) * 0.5, u(rng) * 0.5}, r(rng)};
        const Circle cm{c.center + shift, c.radius};
        CHECK(circle_cell_overlap(c, cell) == circle_cell_overlap(cm, moved));

        const CircularSector s{{u(rng), u(rng)}, r(rng), ang(rng), std::abs(ang(rng))};
        const CircularSector sm{s.apex + shift, s.radius, s.heading, s.half_angle};
        const Circle region{{u(rng), u(rng)}, r(rng)};
        const Circle region_m{region.center + shift, region.radius};
        CHECK(sector_region_intersects(s, region) == sector_region_intersects(sm, region_m));
        CHECK(sector_region_intersects(s, cell) == sector_region_intersects(sm, moved));
    }
}

TEST_CASE("sector membership and distance") {
    const CircularSector s{{0, 0}, 2.0, 0.0, kPi / 4};
    CHECK(point_in_sector({1, 0}, s));
    CHECK(point_in_sector({1, 0.9}, s));
    CHECK_FALSE(point_in_sector({1, 1.1}, s));
    CHECK_FALSE(point_in_sector({-0.5, 0}, s));
    CHECK_FALSE(point_in_sector({2.1, 0}, s));
    CHECK(point_sector_distance({1, 0}, s) == 0.0);
    CHECK(point_sector_distance({3, 0}, s) == doctest::Approx(1.0));
    CHECK(point_sector_distance({-1, 0}, s) == doctest::Approx(1.0));

    CHECK(sector_region_intersects(s, Circle{{3.0, 0}, 1.5}));
    CHECK_FALSE(sector_region_intersects(s, Circle{{-2.0, 0}, 1.5}));
    CHECK_FALSE(sector_region_intersects(s, Circle{{4.0, 0}, 2.0}));  // tangent
    CHECK(sector_region_intersects(s, make_rect({1, -0.1}, {1.2, 0.1})));
    CHECK_FALSE(sector_region_intersects(s, make_rect({-1, -0.1}, {-0.5, 0.1})));
}

TEST_CASE("full-angle sector equals disk intersection") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-4.0, 4.0), r(0.1, 2.0), h(-kPi, kPi);
    for (int t = 0; t < 500; ++t) {
        const Vec2 apex{u(rng), u(rng)};
        const double rad = r(rng);
        const CircularSector s{apex, rad, h(rng), kPi};
        const Circle region{{u(rng), u(rng)}, r(rng)};
        const double gap = distance(apex, region.center) - rad - region.radius;
        if (std::abs(gap) < 1e-6) continue;
        CHECK(sector_region_intersects(s, region) == (gap < 0.0));
        // Half-angle beyond pi is clamped.
        const CircularSector wide{apex, rad, s.heading, 4.0};
        CHECK(sector_region_intersects(wide, region) == (gap < 0.0));
    }
}

TEST_CASE("sector_within_circle") {
    const CircularSector s{{0, 0}, 1.0, 0.0, kPi / 6};
    CHECK(sector_within_circle(s, {{0, 0}, 1.0}));
    CHECK(sector_within_circle(s, {{0.5, 0}, 1.0}));
    CHECK_FALSE(sector_within_circle(s, {{2.0, 0}, 1.5}));
    CHECK_FALSE(sector_within_circle(s, {{0, 0}, 0.9}));
}

TEST_CASE("sector sample points lie in the sector") {
    const CircularSector s{{1, 1}, 1.5, 0.7, kPi / 3};
    const auto pts = sector_sample_points(s, 4, 6);
    REQUIRE_FALSE(pts.empty());
    for (const auto& p : pts) CHECK(point_sector_distance(p, s) < 1e-9);
}

TEST_CASE("enclosing_circle") {
    const Circle a{{0, 0}, 1.0}, b{{4, 0}, 1.0};
    const Circle e = enclosing_circle(a, b);
    CHECK(e.center.x == doctest::Approx(2.0));
    CHECK(e.radius == doctest::Approx(3.0));
    const Circle inner{{0.2, 0}, 0.5};
    const Circle same = enclosing_circle(a, inner);
    CHECK(same.radius == doctest::Approx(1.0));
    CHECK(same.center.x == doctest::Approx(0.0));
}
