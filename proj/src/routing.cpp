#include "hped/routing.hpp"

#include <algorithm>
#include <limits>
#include <queue>

namespace hped {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Polygon ccw(const Polygon& p) {
    Polygon q = p;
    if (q.signed_area() < 0.0) std::reverse(q.vertices.begin(), q.vertices.end());
    return q;
}

Vec2 right_normal(const Vec2& d) { return Vec2{d.y, -d.x}.normalized(); }

// Offsets the vertex v between edges (prev -> v) and (v -> next) so that
// the result lies `dist` away from both edge lines, on the side given by
// `sign` (+1 = right of a CCW boundary, i.e. outside the polygon).
Vec2 corner_offset(const Vec2& prev, const Vec2& v, const Vec2& next, double dist, double sign) {
    const Vec2 n1 = right_normal(v - prev) * sign;
    const Vec2 n2 = right_normal(next - v) * sign;
    const Vec2 b = (n1 + n2).normalized();
    const double c = b.dot(n1);
    return v + b * (dist / std::max(c, 0.2));
}

std::vector<double> dijkstra(const std::vector<std::vector<std::pair<int, double>>>& adj, int source,
                             std::vector<int>* parent) {
    std::vector<double> dist(adj.size(), kInf);
    if (parent) parent->assign(adj.size(), -1);
    using Item = std::pair<double, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
    dist[source] = 0.0;
    pq.push({0.0, source});
    while (!pq.empty()) {
        const auto [d, u] = pq.top();
        pq.pop();
        if (d > dist[u]) continue;
        for (const auto& [v, w] : adj[u]) {
            if (d + w < dist[v]) {
                dist[v] = d + w;
                if (parent) (*parent)[v] = u;
                pq.push({dist[v], v});
            }
        }
    }
    return dist;
}

}  // namespace

std::size_t VisibilityGraph::edge_count() const {
    std::size_t e = 0;
    for (const auto& a : adjacency) e += a.size();
    return e / 2;
}

double VisibilityGraph::clearance(const Vec2& p) const {
    if (!point_in_polygon(p, bounds)) return 0.0;
    double c = point_polygon_boundary_distance(p, bounds);
    for (const auto& o : obstacles) c = std::min(c, point_polygon_distance(p, o));
    return c;
}

double VisibilityGraph::clearance(const Vec2& a, const Vec2& b) const {
    if (!point_in_polygon(a, bounds) || !point_in_polygon(b, bounds)) return 0.0;
    double c = kInf;
    const std::size_t n = bounds.size();
    for (std::size_t i = 0; i < n; ++i) {
        c = std::min(c, segment_segment_distance(a, b, bounds[i], bounds[(i + 1) % n]));
    }
    for (const auto& o : obstacles) {
        c = std::min(c, segment_polygon_distance(a, b, o));
        if (c <= 0.0) return 0.0;
    }
    return c;
}

bool VisibilityGraph::visible(const Vec2& a, const Vec2& b) const {
    const double need = std::min({inflation, clearance(a), clearance(b)});
    const double c = clearance(a, b);
    return c > 0.0 && c >= need - 1e-9;
}

VisibilityGraph build_visibility_graph(const Scenario& s, double inflation) {
    VisibilityGraph g;
    g.inflation = inflation;
    g.bounds = ccw(s.bounds);
    for (const auto& o : s.obstacles) g.obstacles.push_back(ccw(o));

    const double place = inflation * (1.0 + 1e-6) + 1e-9;
    auto try_add = [&](const Vec2& p) {
        if (g.clearance(p) >= inflation - 1e-9) g.nodes.push_back(p);
    };
    for (const auto& o : g.obstacles) {
        const std::size_t n = o.size();
        for (std::size_t i = 0; i < n; ++i) {
            const Vec2& prev = o[(i + n - 1) % n];
            const Vec2& v = o[i];
            const Vec2& next = o[(i + 1) % n];
            if ((v - prev).cross(next - v) > 0.0) try_add(corner_offset(prev, v, next, place, 1.0));
        }
    }
    {
        const Polygon& b = g.bounds;
        const std::size_t n = b.size();
        for (std::size_t i = 0; i < n; ++i) {
            const Vec2& prev = b[(i + n - 1) % n];
            const Vec2& v = b[i];
            const Vec2& next = b[(i + 1) % n];
            if ((v - prev).cross(next - v) < 0.0) try_add(corner_offset(prev, v, next, place, -1.0));
        }
    }
    g.corner_count = g.nodes.size();
    for (const auto& o : s.origins) g.nodes.push_back(o.polygon.centroid());
    for (const auto& d : s.destinations) g.nodes.push_back(d.polygon.centroid());

    g.adjacency.assign(g.nodes.size(), {});
    for (std::size_t i = 0; i < g.nodes.size(); ++i) {
        for (std::size_t j = i + 1; j < g.nodes.size(); ++j) {
            if (g.visible(g.nodes[i], g.nodes[j])) {
                const double w = distance(g.nodes[i], g.nodes[j]);
                g.adjacency[i].push_back({static_cast<int>(j), w});
                g.adjacency[j].push_back({static_cast<int>(i), w});
            }
        }
    }

    const std::size_t first_dest = g.corner_count + s.origins.size();
    for (std::size_t o = 0; o < s.origins.size(); ++o) {
        const auto dist = dijkstra(g.adjacency, static_cast<int>(g.corner_count + o), nullptr);
        for (std::size_t d = 0; d < s.destinations.size(); ++d) {
            if (dist[first_dest + d] == kInf) {
                throw RoutingError("disconnected origin/destination pair: " + s.origins[o].name + " -> " +
                                   s.destinations[d].name);
            }
        }
    }
    return g;
}

std::vector<Vec2> shortest_path(const VisibilityGraph& g, const Vec2& from, const Vec2& to) {
    if (distance(from, to) <= kEps) return {from};
    if (g.visible(from, to)) return {from, to};
    auto adj = g.adjacency;
    const int src = static_cast<int>(adj.size());
    const int dst = src + 1;
    adj.emplace_back();
    adj.emplace_back();
    for (std::size_t i = 0; i < g.nodes.size(); ++i) {
        if (g.visible(from, g.nodes[i])) {
            const double w = distance(from, g.nodes[i]);
            adj[src].push_back({static_cast<int>(i), w});
            adj[i].push_back({src, w});
        }
        if (g.visible(g.nodes[i], to)) {
            const double w = distance(to, g.nodes[i]);
            adj[dst].push_back({static_cast<int>(i), w});
            adj[i].push_back({dst, w});
        }
    }
    std::vector<int> parent;
    const auto dist = dijkstra(adj, src, &parent);
    if (dist[dst] == kInf) throw RoutingError("unreachable target");
    std::vector<Vec2> path;
    for (int v = dst; v != -1; v = parent[v]) {
        path.push_back(v == src ? from : v == dst ? to : g.nodes[v]);
        if (v == src) break;
    }
    std::reverse(path.begin(), path.end());
    return path;
}

double path_length(const std::vector<Vec2>& path) {
    double len = 0.0;
    for (std::size_t i = 1; i < path.size(); ++i) len += distance(path[i - 1], path[i]);
    return len;
}

int assign_destination(const Scenario& s, int origin, std::mt19937_64& rng) {
    if (origin < 0 || origin >= static_cast<int>(s.od_matrix.size())) throw RoutingError("unknown origin");
    const auto& row = s.od_matrix[origin];
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const double x = u(rng);
    double acc = 0.0;
    int last_positive = 0;
    for (std::size_t d = 0; d < row.size(); ++d) {
        if (row[d] > 0.0) last_positive = static_cast<int>(d);
        acc += row[d];
        if (x < acc && row[d] > 0.0) return static_cast<int>(d);
    }
    return last_positive;
}

std::string assign_destination(const Scenario& s, const std::string& origin, std::uint64_t rng_seed) {
    const int o = s.origin_index(origin);
    if (o < 0) throw RoutingError("unknown origin: " + origin);
    std::mt19937_64 rng(rng_seed);
    return s.destinations.at(assign_destination(s, o, rng)).name;
}

Router::Router(VisibilityGraph graph, std::vector<Vec2> targets)
    : graph_(std::move(graph)), targets_(std::move(targets)) {
    const std::size_t n = graph_.nodes.size();
    for (const auto& t : targets_) {
        auto adj = graph_.adjacency;
        adj.emplace_back();
        const int tid = static_cast<int>(n);
        std::vector<char> sees(n, 0);
        for (std::size_t i = 0; i < n; ++i) {
            if (graph_.visible(graph_.nodes[i], t)) {
                const double w = distance(graph_.nodes[i], t);
                adj[i].push_back({tid, w});
                adj[tid].push_back({static_cast<int>(i), w});
                sees[i] = 1;
            }
        }
        std::vector<int> parent;
        auto d = dijkstra(adj, tid, &parent);
        d.resize(n);
        std::vector<int> nxt(n, -1);
        for (std::size_t i = 0; i < n; ++i) nxt[i] = parent[i] == tid ? -1 : parent[i];
        dist_.push_back(std::move(d));
        next_.push_back(std::move(nxt));
        sees_target_.push_back(std::move(sees));
    }
}

std::vector<Vec2> Router::route(const Vec2& from, std::size_t target) const {
    const Vec2& to = targets_.at(target);
    if (distance(from, to) <= kEps) return {from};
    if (graph_.visible(from, to)) return {from, to};
    const auto& dist = dist_[target];
    double best = kInf;
    int best_node = -1;
    for (std::size_t i = 0; i < graph_.nodes.size(); ++i) {
        if (dist[i] == kInf) continue;
        const double via = distance(from, graph_.nodes[i]) + dist[i];
        if (via < best && graph_.visible(from, graph_.nodes[i])) {
            best = via;
            best_node = static_cast<int>(i);
        }
    }
    if (best_node < 0) throw RoutingError("unreachable target");
    std::vector<Vec2> path{from};
    for (int v = best_node; v != -1; v = next_[target][v]) path.push_back(graph_.nodes[v]);
    path.push_back(to);
    return path;
}

}  // namespace hped
