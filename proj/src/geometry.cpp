#include "hped/geometry.hpp"

#include <algorithm>
#include <limits>

namespace hped {

double Polygon::signed_area() const {
    double a = 0.0;
    const std::size_t n = vertices.size();
    for (std::size_t i = 0; i < n; ++i) {
        a += vertices[i].cross(vertices[(i + 1) % n]);
    }
    return 0.5 * a;
}

Vec2 Polygon::centroid() const {
    const double a = signed_area();
    const std::size_t n = vertices.size();
    if (std::abs(a) < kEps) {
        Vec2 s;
        for (const auto& v : vertices) s += v;
        return n ? s / static_cast<double>(n) : s;
    }
    Vec2 c;
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2& p = vertices[i];
        const Vec2& q = vertices[(i + 1) % n];
        const double w = p.cross(q);
        c += (p + q) * w;
    }
    return c / (6.0 * a);
}

std::pair<Vec2, Vec2> Polygon::bounds() const {
    Vec2 lo{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
    Vec2 hi{-lo.x, -lo.y};
    for (const auto& v : vertices) {
        lo.x = std::min(lo.x, v.x);
        lo.y = std::min(lo.y, v.y);
        hi.x = std::max(hi.x, v.x);
        hi.y = std::max(hi.y, v.y);
    }
    return {lo, hi};
}

Polygon make_rect(Vec2 lo, Vec2 hi) {
    return Polygon({lo, {hi.x, lo.y}, hi, {lo.x, hi.y}});
}

double wrap_angle(double a) {
    a = std::fmod(a + kPi, 2.0 * kPi);
    if (a <= 0.0) a += 2.0 * kPi;
    return a - kPi;
}

bool point_in_polygon(const Vec2& p, const Polygon& poly) {
    const std::size_t n = poly.size();
    if (n < 3) return false;
    bool inside = false;
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
        const Vec2& a = poly[i];
        const Vec2& b = poly[j];
        if ((a.y > p.y) != (b.y > p.y)) {
            const double x = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
            if (p.x < x) inside = !inside;
        }
    }
    if (inside) return true;
    for (std::size_t i = 0; i < n; ++i) {
        if ((p - closest_point_on_segment(p, poly[i], poly[(i + 1) % n])).norm2() <= kEps * kEps) return true;
    }
    return false;
}

Vec2 closest_point_on_segment(const Vec2& p, const Vec2& a, const Vec2& b) {
    const Vec2 ab = b - a;
    const double len2 = ab.norm2();
    if (len2 <= 0.0) return a;
    const double t = std::clamp((p - a).dot(ab) / len2, 0.0, 1.0);
    return a + ab * t;
}

double point_segment_distance(const Vec2& p, const Vec2& a, const Vec2& b) {
    return distance(p, closest_point_on_segment(p, a, b));
}

double point_polygon_boundary_distance(const Vec2& p, const Polygon& poly) {
    double best = std::numeric_limits<double>::infinity();
    const std::size_t n = poly.size();
    for (std::size_t i = 0; i < n; ++i) {
        best = std::min(best, point_segment_distance(p, poly[i], poly[(i + 1) % n]));
    }
    return best;
}

double point_polygon_distance(const Vec2& p, const Polygon& poly) {
    if (point_in_polygon(p, poly)) return 0.0;
    return point_polygon_boundary_distance(p, poly);
}

namespace {

int orientation(const Vec2& a, const Vec2& b, const Vec2& c) {
    const double v = (b - a).cross(c - a);
    if (v > kEps * kEps) return 1;
    if (v < -kEps * kEps) return -1;
    return 0;
}

}  // namespace

bool segments_properly_intersect(const Vec2& a, const Vec2& b, const Vec2& c, const Vec2& d) {
    const int o1 = orientation(a, b, c);
    const int o2 = orientation(a, b, d);
    const int o3 = orientation(c, d, a);
    const int o4 = orientation(c, d, b);
    return o1 * o2 < 0 && o3 * o4 < 0;
}

double segment_segment_distance(const Vec2& a, const Vec2& b, const Vec2& c, const Vec2& d) {
    if (segments_properly_intersect(a, b, c, d)) return 0.0;
    return std::min({point_segment_distance(a, c, d), point_segment_distance(b, c, d),
                     point_segment_distance(c, a, b), point_segment_distance(d, a, b)});
}

double segment_polygon_distance(const Vec2& a, const Vec2& b, const Polygon& poly) {
    if (point_in_polygon(a, poly) || point_in_polygon(b, poly)) return 0.0;
    double best = std::numeric_limits<double>::infinity();
    const std::size_t n = poly.size();
    for (std::size_t i = 0; i < n; ++i) {
        best = std::min(best, segment_segment_distance(a, b, poly[i], poly[(i + 1) % n]));
    }
    return best;
}

Polygon clip_convex(const Polygon& subject, const Polygon& clip) {
    std::vector<Vec2> out = subject.vertices;
    const bool ccw = clip.signed_area() >= 0.0;
    const std::size_t m = clip.size();
    for (std::size_t e = 0; e < m && !out.empty(); ++e) {
        Vec2 a = clip[e];
        Vec2 b = clip[(e + 1) % m];
        if (!ccw) std::swap(a, b);
        const Vec2 ab = b - a;
        auto side = [&](const Vec2& p) { return ab.cross(p - a); };
        std::vector<Vec2> in = std::move(out);
        out.clear();
        const std::size_t n = in.size();
        for (std::size_t i = 0; i < n; ++i) {
            const Vec2& cur = in[i];
            const Vec2& prev = in[(i + n - 1) % n];
            const double sc = side(cur);
            const double sp = side(prev);
            if (sc >= 0.0) {
                if (sp < 0.0) out.push_back(prev + (cur - prev) * (sp / (sp - sc)));
                out.push_back(cur);
            } else if (sp >= 0.0) {
                out.push_back(prev + (cur - prev) * (sp / (sp - sc)));
            }
        }
    }
    return Polygon(std::move(out));
}

double intersection_area_convex(const Polygon& subject, const Polygon& convex_clip) {
    const Polygon p = clip_convex(subject, convex_clip);
    return p.size() < 3 ? 0.0 : p.area();
}

bool circle_cell_overlap(const Circle& c, const Polygon& cell_bounds) {
    return point_polygon_distance(c.center, cell_bounds) < c.radius - kEps;
}

bool circle_box_overlap(const Circle& c, const Vec2& lo, const Vec2& hi) {
    const double dx = std::max({lo.x - c.center.x, 0.0, c.center.x - hi.x});
    const double dy = std::max({lo.y - c.center.y, 0.0, c.center.y - hi.y});
    const double lim = c.radius - kEps;
    return lim > 0.0 && dx * dx + dy * dy < lim * lim;
}

namespace {

bool full_disk(const CircularSector& s) { return s.half_angle >= kPi - 1e-12; }

Vec2 unit(double angle) { return {std::cos(angle), std::sin(angle)}; }

bool angle_in_range(double angle, const CircularSector& s) {
    return full_disk(s) || std::abs(wrap_angle(angle - s.heading)) <= s.half_angle + 1e-12;
}

}  // namespace

bool point_in_sector(const Vec2& p, const CircularSector& s) {
    const Vec2 d = p - s.apex;
    const double r = d.norm();
    if (r > s.radius + kEps) return false;
    if (r <= kEps) return true;
    return angle_in_range(std::atan2(d.y, d.x), s);
}

double point_sector_distance(const Vec2& p, const CircularSector& s) {
    const Vec2 d = p - s.apex;
    const double r = d.norm();
    if (full_disk(s)) return std::max(0.0, r - s.radius);
    if (point_in_sector(p, s)) return 0.0;
    const double half = std::min(s.half_angle, kPi);
    const Vec2 e1 = s.apex + unit(s.heading - half) * s.radius;
    const Vec2 e2 = s.apex + unit(s.heading + half) * s.radius;
    double best = std::min(point_segment_distance(p, s.apex, e1), point_segment_distance(p, s.apex, e2));
    if (r > kEps && angle_in_range(std::atan2(d.y, d.x), s)) {
        best = std::min(best, std::abs(r - s.radius));
    }
    return best;
}

bool sector_region_intersects(const CircularSector& s, const Circle& region) {
    return point_sector_distance(region.center, s) < region.radius - kEps;
}

std::vector<Vec2> sector_sample_points(const CircularSector& s, int radial, int angular) {
    std::vector<Vec2> pts;
    const double half = std::min(s.half_angle, kPi);
    pts.reserve(static_cast<std::size_t>(radial * (angular + 1) + 1));
    pts.push_back(s.apex);
    for (int i = 1; i <= radial; ++i) {
        const double rr = s.radius * static_cast<double>(i) / radial;
        for (int j = 0; j <= angular; ++j) {
            const double a = s.heading - half + 2.0 * half * static_cast<double>(j) / angular;
            pts.push_back(s.apex + unit(a) * rr);
        }
    }
    return pts;
}

bool sector_region_intersects(const CircularSector& s, const Polygon& region) {
    if (full_disk(s)) {
        return point_polygon_distance(s.apex, region) < s.radius - kEps;
    }
    auto strictly_inside_region = [&](const Vec2& p) {
        return point_in_polygon(p, region) && point_polygon_boundary_distance(p, region) > kEps;
    };
    if (strictly_inside_region(s.apex)) return true;
    for (const auto& v : region.vertices) {
        const Vec2 d = v - s.apex;
        const double r = d.norm();
        if (r > kEps && r < s.radius - kEps &&
            std::abs(wrap_angle(std::atan2(d.y, d.x) - s.heading)) < s.half_angle - 1e-12) {
            return true;
        }
    }
    const double half = s.half_angle;
    const Vec2 e1 = s.apex + unit(s.heading - half) * s.radius;
    const Vec2 e2 = s.apex + unit(s.heading + half) * s.radius;
    const std::size_t n = region.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2& a = region[i];
        const Vec2& b = region[(i + 1) % n];
        if (segments_properly_intersect(a, b, s.apex, e1) || segments_properly_intersect(a, b, s.apex, e2)) {
            return true;
        }
        // edge vs arc: solve |a + t(b-a) - apex| = radius
        const Vec2 ab = b - a;
        const Vec2 w = a - s.apex;
        const double qa = ab.norm2();
        const double qb = 2.0 * w.dot(ab);
        const double qc = w.norm2() - s.radius * s.radius;
        const double disc = qb * qb - 4.0 * qa * qc;
        if (qa > 0.0 && disc > 0.0) {
            const double sq = std::sqrt(disc);
            for (double t : {(-qb - sq) / (2.0 * qa), (-qb + sq) / (2.0 * qa)}) {
                if (t <= 1e-12 || t >= 1.0 - 1e-12) continue;
                const Vec2 hit = a + ab * t - s.apex;
                if (std::abs(wrap_angle(std::atan2(hit.y, hit.x) - s.heading)) < half - 1e-12) return true;
            }
        }
    }
    // interior lattice catches configurations that only touch the
    // sector's boundary at the apex
    for (const auto& p : sector_sample_points(s, 4, 8)) {
        if (strictly_inside_region(p)) return true;
    }
    return false;
}

bool sector_within_circle(const CircularSector& s, const Circle& c) {
    const Vec2 w = s.apex - c.center;
    if (w.norm() > c.radius + kEps) return false;
    double best_dot;
    const double wn = w.norm();
    if (wn <= 0.0 || full_disk(s) || angle_in_range(std::atan2(w.y, w.x), s)) {
        best_dot = wn;
    } else {
        const double half = s.half_angle;
        best_dot = std::max(w.dot(unit(s.heading - half)), w.dot(unit(s.heading + half)));
    }
    const double far2 = w.norm2() + s.radius * s.radius + 2.0 * s.radius * best_dot;
    return std::sqrt(std::max(0.0, far2)) <= c.radius + kEps;
}

Circle enclosing_circle(const Circle& a, const Circle& b) {
    const Vec2 d = b.center - a.center;
    const double dist = d.norm();
    if (dist + b.radius <= a.radius) return a;
    if (dist + a.radius <= b.radius) return b;
    const double r = 0.5 * (dist + a.radius + b.radius);
    const Vec2 center = a.center + d * ((r - a.radius) / dist);
    return {center, r};
}

}  // namespace hped
