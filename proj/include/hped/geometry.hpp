#pragma once
/**
 * @file geometry.hpp
 * @brief 2-D primitives and the intersection predicates shared by both
 *        pedestrian models and the coupling layer.
 *
 * All lengths are meters in double precision. Overlap predicates use
 * open-set semantics: shapes that only touch along a boundary do not
 * overlap. Degenerate comparisons use kEps.
 */

#include <cmath>
#include <numbers>
#include <vector>

namespace hped {

inline constexpr double kEps = 1e-9;
inline constexpr double kPi = std::numbers::pi;

struct Vec2 {
    double x{0.0};
    double y{0.0};

    constexpr Vec2() = default;
    constexpr Vec2(double x_, double y_) : x(x_), y(y_) {}

    constexpr Vec2 operator+(const Vec2& r) const { return {x + r.x, y + r.y}; }
    constexpr Vec2 operator-(const Vec2& r) const { return {x - r.x, y - r.y}; }
    constexpr Vec2 operator-() const { return {-x, -y}; }
    constexpr Vec2 operator*(double s) const { return {x * s, y * s}; }
    constexpr Vec2 operator/(double s) const { return {x / s, y / s}; }
    constexpr Vec2& operator+=(const Vec2& r) { x += r.x; y += r.y; return *this; }
    constexpr Vec2& operator-=(const Vec2& r) { x -= r.x; y -= r.y; return *this; }
    constexpr Vec2& operator*=(double s) { x *= s; y *= s; return *this; }
    constexpr bool operator==(const Vec2&) const = default;

    constexpr double dot(const Vec2& r) const { return x * r.x + y * r.y; }
    constexpr double cross(const Vec2& r) const { return x * r.y - y * r.x; }
    constexpr double norm2() const { return x * x + y * y; }
    double norm() const { return std::sqrt(x * x + y * y); }

    /// Unit vector, or {0,0} when the norm is below eps.
    Vec2 normalized(double eps = 1e-12) const {
        const double n = norm();
        return n > eps ? Vec2{x / n, y / n} : Vec2{};
    }
    bool finite() const { return std::isfinite(x) && std::isfinite(y); }
};

constexpr Vec2 operator*(double s, const Vec2& v) { return v * s; }

inline double distance(const Vec2& a, const Vec2& b) { return (a - b).norm(); }

struct Circle {
    Vec2 center;
    double radius{0.0};
};

/// Circular sector: all points within `radius` of `apex` whose direction
/// deviates from `heading` by at most `half_angle`. half_angle >= pi is a
/// full disk.
struct CircularSector {
    Vec2 apex;
    double radius{0.0};
    double heading{0.0};
    double half_angle{0.0};
};

struct Polygon {
    std::vector<Vec2> vertices;

    Polygon() = default;
    explicit Polygon(std::vector<Vec2> v) : vertices(std::move(v)) {}

    std::size_t size() const { return vertices.size(); }
    const Vec2& operator[](std::size_t i) const { return vertices[i]; }

    double signed_area() const;
    double area() const { return std::abs(signed_area()); }
    Vec2 centroid() const;
    /// Axis-aligned bounding box as {min, max}.
    std::pair<Vec2, Vec2> bounds() const;
    bool operator==(const Polygon&) const = default;
};

/// Axis-aligned rectangle [lo, hi] as a counter-clockwise polygon.
Polygon make_rect(Vec2 lo, Vec2 hi);

/// Wraps an angle to (-pi, pi].
double wrap_angle(double a);

/// Even-odd containment; points on the boundary count as inside.
bool point_in_polygon(const Vec2& p, const Polygon& poly);

/// Distance from p to the closed segment [a, b].
double point_segment_distance(const Vec2& p, const Vec2& a, const Vec2& b);
Vec2 closest_point_on_segment(const Vec2& p, const Vec2& a, const Vec2& b);

/// Distance from p to the polygon boundary (not the region).
double point_polygon_boundary_distance(const Vec2& p, const Polygon& poly);

/// Distance from p to the closed polygon region (0 when inside).
double point_polygon_distance(const Vec2& p, const Polygon& poly);

/// Minimum distance between two closed segments.
double segment_segment_distance(const Vec2& a, const Vec2& b, const Vec2& c, const Vec2& d);

/// True iff the segments cross at a single interior point of both
/// (touching at endpoints or collinear overlap is not a proper crossing).
bool segments_properly_intersect(const Vec2& a, const Vec2& b, const Vec2& c, const Vec2& d);

/// Distance from segment [a,b] to the closed polygon region.
double segment_polygon_distance(const Vec2& a, const Vec2& b, const Polygon& poly);

/// Clips `subject` against the convex polygon `clip` (Sutherland-Hodgman).
Polygon clip_convex(const Polygon& subject, const Polygon& clip);

/// Area of (subject ∩ convex clip).
double intersection_area_convex(const Polygon& subject, const Polygon& convex_clip);

/// True iff the open disk intersects the open interior of a convex cell.
bool circle_cell_overlap(const Circle& c, const Polygon& cell_bounds);

/// Same predicate for an axis-aligned square cell [lo, hi]; the hot-path
/// variant used by grid code.
bool circle_box_overlap(const Circle& c, const Vec2& lo, const Vec2& hi);

bool point_in_sector(const Vec2& p, const CircularSector& s);

/// Distance from p to the closed sector region (0 when inside).
double point_sector_distance(const Vec2& p, const CircularSector& s);

/// True iff the sector and the region share an interior point.
bool sector_region_intersects(const CircularSector& s, const Circle& region);
bool sector_region_intersects(const CircularSector& s, const Polygon& region);

/// True iff every point of the sector lies in the closed disk.
bool sector_within_circle(const CircularSector& s, const Circle& c);

/// Boundary sample points of the sector plus an interior polar lattice;
/// used for coarse region tests against non-convex regions.
std::vector<Vec2> sector_sample_points(const CircularSector& s, int radial, int angular);

/// Smallest circle enclosing two circles.
Circle enclosing_circle(const Circle& a, const Circle& b);

}  // namespace hped
