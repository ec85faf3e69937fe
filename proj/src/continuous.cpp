#include "hped/continuous.hpp"

#include <algorithm>
#include <cmath>

namespace hped {

Vec2 Route::current() const {
    if (waypoints.empty()) return {};
    return waypoints[std::min(next, waypoints.size() - 1)];
}

Vec2 Route::previous() const {
    if (waypoints.empty()) return {};
    return waypoints[std::min(next, waypoints.size() - 1) - (next > 0 ? 1 : 0)];
}

void Route::advance_if_within(const Vec2& p, double radius) {
    while (!at_last() && distance(p, waypoints[next]) <= radius) ++next;
}

Vec2 pair_force(const Vec2& pi, const Vec2& vi, double ri, double mi, const Vec2& pj, const Vec2& vj, double rj,
                const SimParams& p) {
    const Vec2 diff = pi - pj;
    const double d = diff.norm();
    if (d < 1e-12) return {};
    const Vec2 n = diff / d;
    const double rij = ri + rj;
    const double overlap = rij - d;
    double fn = mi * p.sf_A_mps2 * std::exp(overlap / p.sf_B_m);
    Vec2 f;
    if (overlap > 0.0) {
        fn += p.sf_kappa_kg_s2 * overlap;
        const Vec2 t{-n.y, n.x};
        const double dvt = (vj - vi).dot(t);
        f = t * (p.sf_k_kg_m_s * overlap * dvt);
    }
    return f + n * fn;
}

Vec2 wall_force(const Vec2& pi, const Vec2& vi, double ri, double mi, const Vec2& q, const SimParams& p) {
    const Vec2 diff = pi - q;
    const double d = diff.norm();
    if (d < 1e-12) return {};
    const Vec2 n = diff / d;
    const double overlap = ri - d;
    double fn = mi * p.sf_A_mps2 * std::exp(overlap / p.sf_B_m);
    Vec2 f;
    if (overlap > 0.0) {
        fn += p.sf_kappa_kg_s2 * overlap;
        const Vec2 t{-n.y, n.x};
        f = t * (-p.sf_k_kg_m_s * overlap * vi.dot(t));
    }
    return f + n * fn;
}

Vec2 extrapolate_position(const ContinuousAgent& a, double dt_star) { return a.position + a.velocity * dt_star; }

SocialForceModel::SocialForceModel(const Scenario& s, const SimParams& p)
    : params_(p), bounds_(s.bounds), bucket_size_(p.force_cutoff_m) {
    for (const auto& o : s.obstacles) {
        const auto [lo, hi] = o.bounds();
        obstacles_.push_back({o, lo, hi});
    }
    const auto [lo, hi] = s.bounds.bounds();
    origin_ = lo - Vec2{bucket_size_, bucket_size_};
    bcols_ = static_cast<int>(std::ceil((hi.x - lo.x) / bucket_size_)) + 3;
    brows_ = static_cast<int>(std::ceil((hi.y - lo.y) / bucket_size_)) + 3;
}

int SocialForceModel::bucket_of(const Vec2& p) const {
    const int bx = std::clamp(static_cast<int>(std::floor((p.x - origin_.x) / bucket_size_)), 0, bcols_ - 1);
    const int by = std::clamp(static_cast<int>(std::floor((p.y - origin_.y) / bucket_size_)), 0, brows_ - 1);
    return by * bcols_ + bx;
}

void SocialForceModel::build_buckets(const std::vector<ContinuousAgent>& agents,
                                     const std::vector<StaticCircle>& statics) {
    const std::size_t nb = static_cast<std::size_t>(bcols_) * brows_;
    start_.assign(nb + 1, 0);
    for (const auto& a : agents) ++start_[bucket_of(a.position) + 1];
    for (const auto& s : statics) ++start_[bucket_of(s.center) + 1];
    for (std::size_t b = 0; b < nb; ++b) start_[b + 1] += start_[b];
    items_.assign(agents.size() + statics.size(), 0);
    std::vector<int> fill(start_.begin(), start_.end() - 1);
    for (std::size_t i = 0; i < agents.size(); ++i) items_[fill[bucket_of(agents[i].position)]++] = static_cast<int>(i);
    for (std::size_t k = 0; k < statics.size(); ++k) items_[fill[bucket_of(statics[k].center)]++] = ~static_cast<int>(k);
}

bool SocialForceModel::position_valid(const Vec2& p) const {
    if (!point_in_polygon(p, bounds_)) return false;
    for (const auto& w : obstacles_) {
        if (p.x < w.lo.x || p.x > w.hi.x || p.y < w.lo.y || p.y > w.hi.y) continue;
        if (point_in_polygon(p, w.poly)) return false;
    }
    return true;
}

namespace {

// Closest point of the polygon boundary to p.
Vec2 closest_boundary_point(const Vec2& p, const Polygon& poly) {
    Vec2 best = poly[0];
    double bd = (p - best).norm2();
    const std::size_t n = poly.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2 q = closest_point_on_segment(p, poly[i], poly[(i + 1) % n]);
        const double d = (p - q).norm2();
        if (d < bd) {
            bd = d;
            best = q;
        }
    }
    return best;
}

}  // namespace

void SocialForceModel::step(std::vector<ContinuousAgent>& agents, const std::vector<StaticCircle>& statics,
                            double dt) {
    const SimParams& p = params_;
    const double cutoff = p.force_cutoff_m;
    const double cutoff2 = cutoff * cutoff;
    for (auto& a : agents) a.route.advance_if_within(a.position, 2.0 * a.radius);
    build_buckets(agents, statics);
    accel_.assign(agents.size(), Vec2{});

    for (std::size_t i = 0; i < agents.size(); ++i) {
        const ContinuousAgent& a = agents[i];
        const Vec2 e = (a.current_waypoint() - a.position).normalized();
        Vec2 f = (e * a.desired_speed - a.velocity) * (a.mass / p.relaxation_time_s);

        const int b = bucket_of(a.position);
        const int bx = b % bcols_;
        const int by = b / bcols_;
        Vec2 f_agents;
        Vec2 f_statics;
        bool any_agent = false;
        bool any_static = false;
        for (int y = std::max(0, by - 1); y <= std::min(brows_ - 1, by + 1); ++y) {
            for (int x = std::max(0, bx - 1); x <= std::min(bcols_ - 1, bx + 1); ++x) {
                const int cell = y * bcols_ + x;
                for (int k = start_[cell]; k < start_[cell + 1]; ++k) {
                    const int it = items_[k];
                    if (it >= 0) {
                        if (static_cast<std::size_t>(it) == i) continue;
                        const ContinuousAgent& o = agents[it];
                        if ((o.position - a.position).norm2() >= cutoff2) continue;
                        f_agents += pair_force(a.position, a.velocity, a.radius, a.mass, o.position, o.velocity,
                                               o.radius, p);
                        any_agent = true;
                    } else {
                        const StaticCircle& s = statics[~it];
                        if ((s.center - a.position).norm2() >= cutoff2) continue;
                        f_statics += pair_force(a.position, a.velocity, a.radius, a.mass, s.center, Vec2{}, s.radius, p);
                        any_static = true;
                    }
                }
            }
        }
        if (any_agent) f += f_agents;
        if (any_static) f += f_statics;

        const Vec2 qb = closest_boundary_point(a.position, bounds_);
        if ((qb - a.position).norm2() < cutoff2) f += wall_force(a.position, a.velocity, a.radius, a.mass, qb, p);
        for (const auto& w : obstacles_) {
            if (a.position.x < w.lo.x - cutoff || a.position.x > w.hi.x + cutoff || a.position.y < w.lo.y - cutoff ||
                a.position.y > w.hi.y + cutoff) {
                continue;
            }
            const Vec2 q = closest_boundary_point(a.position, w.poly);
            if ((q - a.position).norm2() < cutoff2) f += wall_force(a.position, a.velocity, a.radius, a.mass, q, p);
        }
        accel_[i] = f / a.mass;
    }

    for (std::size_t i = 0; i < agents.size(); ++i) {
        ContinuousAgent& a = agents[i];
        Vec2 v = a.velocity + accel_[i] * dt;
        const double speed = v.norm();
        if (speed > p.v_max_mps) v *= p.v_max_mps / speed;
        a.velocity = v;
        const Vec2 target = a.position + v * dt;
        if (position_valid(target)) {
            a.position = target;
        } else if (const Vec2 sx{target.x, a.position.y}; position_valid(sx)) {
            a.position = sx;
            a.velocity.y = 0.0;
        } else if (const Vec2 sy{a.position.x, target.y}; position_valid(sy)) {
            a.position = sy;
            a.velocity.x = 0.0;
        } else {
            a.velocity = Vec2{};
        }
    }
}

}  // namespace hped
