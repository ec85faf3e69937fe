#pragma once
// Strategic and tactical layer: OD-matrix destination choice and shortest
// paths on a static visibility graph.

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "hped/geometry.hpp"
#include "hped/scenario.hpp"

namespace hped {

class RoutingError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct VisibilityGraph {
    std::vector<Vec2> nodes;
    /// Number of leading nodes that are obstacle corners; the rest are
    /// origin/destination centroids.
    std::size_t corner_count{0};
    std::vector<std::vector<std::pair<int, double>>> adjacency;
    double inflation{0.0};
    std::vector<Polygon> obstacles;  ///< CCW copies
    Polygon bounds;                  ///< CCW copy

    std::size_t edge_count() const;
    /// Distance from the segment to the nearest blocked point (obstacle or
    /// outside of bounds); 0 if the segment leaves the free space.
    double clearance(const Vec2& a, const Vec2& b) const;
    double clearance(const Vec2& p) const;
    /// Line of sight with the clearance the graph was built for, relaxed to
    /// the endpoints' own clearance when an endpoint sits closer to a wall.
    bool visible(const Vec2& a, const Vec2& b) const;
};

/// Corner nodes are offset outward by `inflation` from each convex corner
/// of the blocked space. Throws RoutingError if some origin cannot reach
/// some destination.
VisibilityGraph build_visibility_graph(const Scenario& s, double inflation);

/// Waypoints from `from` to `to` minimizing Euclidean length over the
/// graph. Throws RoutingError when unreachable.
std::vector<Vec2> shortest_path(const VisibilityGraph& g, const Vec2& from, const Vec2& to);

double path_length(const std::vector<Vec2>& path);

/// Samples a destination index from the origin's OD row.
int assign_destination(const Scenario& s, int origin, std::mt19937_64& rng);
/// Seeded convenience form; throws RoutingError for an unknown origin.
std::string assign_destination(const Scenario& s, const std::string& origin, std::uint64_t rng_seed);

/// Shortest paths to a fixed set of targets, with one Dijkstra tree per
/// target precomputed.
class Router {
public:
    Router(VisibilityGraph graph, std::vector<Vec2> targets);

    const VisibilityGraph& graph() const { return graph_; }
    const std::vector<Vec2>& targets() const { return targets_; }
    std::vector<Vec2> route(const Vec2& from, std::size_t target) const;

private:
    VisibilityGraph graph_;
    std::vector<Vec2> targets_;
    std::vector<std::vector<double>> dist_;  // per target, per node
    std::vector<std::vector<int>> next_;     // successor toward target, -1 = target
    std::vector<std::vector<char>> sees_target_;
};

}  // namespace hped
