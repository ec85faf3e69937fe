#include "hped/discrete.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace hped {

double discrete_waypoint_radius(const SimParams& p) {
    return 2.0 * p.torso_radius_m + p.cell_edge_m * std::sqrt(2.0) / 2.0;
}

namespace {

constexpr int kDm[8] = {-1, -1, -1, 0, 0, 1, 1, 1};
constexpr int kDn[8] = {-1, 0, 1, -1, 1, -1, 0, 1};

bool blocked(const Grid& g, const CellIndex& c, const std::vector<char>* forbidden) {
    return forbidden && (*forbidden)[g.linear(c)];
}

}  // namespace

void step_discrete(std::vector<DiscreteAgent>& agents, Grid& grid, const SimParams& p, double dt,
                   std::mt19937_64& rng, const std::vector<char>* forbidden) {
    std::vector<std::size_t> order(agents.size());
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    const double edge = grid.cell_edge();
    const double wp_radius = discrete_waypoint_radius(p);

    for (std::size_t idx : order) {
        DiscreteAgent& a = agents[idx];
        const CellIndex start = a.cell;
        const Vec2 start_center = grid.cell_center(start);
        const double budget = a.desired_speed * dt;
        a.stock = std::min(a.stock + budget, (p.k_stock + 1.0) * budget);
        a.held_at_core = false;
        bool moved = false;

        for (;;) {
            const Vec2 here = grid.cell_center(a.cell);
            a.route.advance_if_within(here, wp_radius);
            const Vec2 target = a.route.current();
            const Vec2 prev = a.route.previous();
            const double d_here = distance(here, target);
            bool found = false;
            CellIndex best{};
            double best_line = 0.0;
            double best_target = 0.0;
            for (int k = 0; k < 8; ++k) {
                const CellIndex c{a.cell.m + kDm[k], a.cell.n + kDn[k]};
                if (!grid.in_range(c) || !grid.is_free(c)) continue;
                const Vec2 cc = grid.cell_center(c);
                const double d_target = distance(cc, target);
                if (d_target >= d_here) continue;
                const double d_line = point_segment_distance(cc, prev, target);
                const bool better = !found || d_line < best_line - 1e-12 ||
                                    (d_line <= best_line + 1e-12 &&
                                     (d_target < best_target - 1e-12 ||
                                      (d_target <= best_target + 1e-12 && grid.linear(c) < grid.linear(best))));
                if (better) {
                    found = true;
                    best = c;
                    best_line = d_line;
                    best_target = d_target;
                }
            }
            if (!found) break;
            if (blocked(grid, best, forbidden)) {
                a.held_at_core = true;
                break;
            }
            const double step = (best.m != a.cell.m && best.n != a.cell.n) ? edge * std::sqrt(2.0) : edge;
            if (a.stock < step) break;
            grid.vacate(a.cell, a.id);
            grid.occupy(best, a.id);
            a.cell = best;
            a.stock -= step;
            moved = true;
        }

        if (!moved && a.stock > p.k_stock * budget) {
            std::vector<CellIndex> free;
            for (int k = 0; k < 8; ++k) {
                const CellIndex c{a.cell.m + kDm[k], a.cell.n + kDn[k]};
                if (grid.in_range(c) && grid.is_free(c) && !blocked(grid, c, forbidden)) free.push_back(c);
            }
            if (!free.empty()) {
                std::uniform_int_distribution<std::size_t> pick(0, free.size() - 1);
                const CellIndex c = free[pick(rng)];
                const double step = (c.m != a.cell.m && c.n != a.cell.n) ? edge * std::sqrt(2.0) : edge;
                if (a.stock >= step) {
                    grid.vacate(a.cell, a.id);
                    grid.occupy(c, a.id);
                    a.cell = c;
                    a.stock -= step;
                }
            }
        }
        a.velocity = (grid.cell_center(a.cell) - start_center) / dt;
        // A stock burst can exceed v_max for one step; the reported velocity cannot.
        const double speed = a.velocity.norm();
        if (speed > p.v_max_mps) a.velocity = a.velocity * (p.v_max_mps / speed);
    }
}

double realized_speed(const std::vector<Vec2>& history, double T) {
    if (T <= 0.0) return 0.0;
    double len = 0.0;
    for (std::size_t i = 1; i < history.size(); ++i) len += distance(history[i - 1], history[i]);
    return len / T;
}

}  // namespace hped
