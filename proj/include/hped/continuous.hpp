#pragma once
// Social-force model for agents in continuous space.

#include <vector>

#include "hped/geometry.hpp"
#include "hped/grid.hpp"
#include "hped/scenario.hpp"

namespace hped {

/// Waypoint list shared by both representations. waypoints[0] is where the
/// route was planned from; `next` indexes the current target.
struct Route {
    std::vector<Vec2> waypoints;
    std::size_t next{1};
    int destination{-1};

    bool empty() const { return waypoints.empty(); }
    Vec2 current() const;
    Vec2 previous() const;
    bool at_last() const { return next + 1 >= waypoints.size(); }
    /// Moves on to the following waypoint while p is within `radius` of the
    /// current one. The final waypoint is never skipped.
    void advance_if_within(const Vec2& p, double radius);
};

struct ContinuousAgent {
    AgentId id{kNoAgent};
    Vec2 position;
    Vec2 velocity;
    double radius{0.23};
    double desired_speed{1.34};
    double mass{75.0};
    Route route;

    Vec2 current_waypoint() const { return route.current(); }
};

/// A non-moving body the continuous model must avoid: a virtual pedestrian
/// or a discrete agent shown to the continuous side.
struct StaticCircle {
    AgentId id{kNoAgent};
    Vec2 center;
    double radius{0.23};
};

/// Force exerted on agent i (mass m_i) by body j.
Vec2 pair_force(const Vec2& pi, const Vec2& vi, double ri, double mi, const Vec2& pj, const Vec2& vj, double rj,
                const SimParams& p);

/// Force on agent i from the wall point q (closest point of an obstacle or
/// the bounds boundary).
Vec2 wall_force(const Vec2& pi, const Vec2& vi, double ri, double mi, const Vec2& q, const SimParams& p);

Vec2 extrapolate_position(const ContinuousAgent& a, double dt_star);

class SocialForceModel {
public:
    SocialForceModel(const Scenario& s, const SimParams& p);

    /// Advances all agents by dt. Forces are evaluated on the pre-step
    /// snapshot, then velocities and positions are committed.
    void step(std::vector<ContinuousAgent>& agents, const std::vector<StaticCircle>& statics, double dt);

    /// True if p is inside the bounds and outside every obstacle.
    bool position_valid(const Vec2& p) const;
    const SimParams& params() const { return params_; }

private:
    struct Wall {
        Polygon poly;
        Vec2 lo, hi;
    };

    void build_buckets(const std::vector<ContinuousAgent>& agents, const std::vector<StaticCircle>& statics);
    int bucket_of(const Vec2& p) const;

    SimParams params_;
    Polygon bounds_;
    std::vector<Wall> obstacles_;
    Vec2 origin_;
    double bucket_size_;
    int bcols_{1};
    int brows_{1};
    std::vector<int> start_;
    std::vector<int> items_;  // >= 0 agent index, < 0 static index as ~idx
    std::vector<Vec2> accel_;
};

}  // namespace hped
