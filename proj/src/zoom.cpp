#include "hped/zoom.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

namespace hped {

std::vector<HotCell> zoom_in_scan(const Grid& g, const std::vector<double>& rho, double threshold, double influence,
                                  const std::vector<char>* excluded) {
    std::vector<char> gone(rho.size(), 0);
    if (excluded) gone = *excluded;
    std::vector<std::size_t> order;
    for (std::size_t i = 0; i < rho.size(); ++i) {
        if (rho[i] >= threshold && !gone[i]) order.push_back(i);
    }
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return rho[a] > rho[b]; });
    std::vector<HotCell> out;
    for (std::size_t i : order) {
        if (gone[i]) continue;
        if (rho[i] < threshold) break;
        const CellIndex c = g.from_linear(i);
        out.push_back({c, rho[i]});
        for (const auto& d : g.cells_in_disk(g.cell_center(c), influence)) gone[g.linear(d)] = 1;
    }
    return out;
}

double local_density(const Grid& g, const std::vector<double>& rho, const Vec2& point, double radius) {
    if (radius <= 0.0) return 0.0;
    double sum = 0.0;
    int count = 0;
    for (const auto& c : g.cells_in_disk(point, radius)) {
        if (g.is_obstacle(c)) continue;
        sum += rho[g.linear(c)];
        ++count;
    }
    return count ? sum / count : 0.0;
}

Vec2 density_center(const Grid& g, const std::vector<double>& rho, const Vec2& point, double radius) {
    double w = 0.0;
    Vec2 acc;
    for (const auto& c : g.cells_in_disk(point, radius)) {
        if (g.is_obstacle(c)) continue;
        const double r = rho[g.linear(c)];
        w += r;
        acc += g.cell_center(c) * r;
    }
    return w > 0.0 ? acc / w : point;
}

ZoneSize size_zone(const Grid& g, const std::vector<double>& rho, const CellIndex& c_star, double threshold,
                   double unit_radius, int k_max, std::vector<HotCell>* pool) {
    const Vec2 c = g.cell_center(c_star);
    int k = 1;
    while (k < k_max && local_density(g, rho, c, k * unit_radius) >= threshold) ++k;
    const double radius = k * unit_radius;
    if (pool) {
        pool->erase(std::remove_if(pool->begin(), pool->end(),
                                   [&](const HotCell& h) { return distance(g.cell_center(h.cell), c) <= radius; }),
                    pool->end());
    }
    return {k, density_center(g, rho, c, radius)};
}

double ring_density(const Grid& g, const std::vector<double>& rho, const Vec2& center, double unit_radius, int k) {
    const double outer = local_density(g, rho, center, k * unit_radius);
    const double inner = k > 1 ? local_density(g, rho, center, (k - 1) * unit_radius) : 0.0;
    const double kk = k;
    return (outer * kk * kk - inner * (kk - 1) * (kk - 1)) / (2 * kk - 1);
}

int zoom_out_target(const Grid& g, const std::vector<double>& rho, const ContinuousZone& z, double threshold) {
    for (int ring = z.k; ring >= 1; --ring) {
        if (ring_density(g, rho, z.center, z.unit_radius, ring) >= threshold) return ring;
    }
    return 0;
}

namespace {

int population(const ContinuousZone& z, const std::vector<ContinuousAgent>& cont) {
    int n = 0;
    for (const auto& a : cont) if ((a.position - z.center).norm2() < z.radius() * z.radius()) ++n;
    return n;
}

void log_event(ZoomTick& out, std::int64_t frame, double t, const char* what, const ContinuousZone& z,
               const std::vector<ContinuousAgent>& cont) {
    out.events.push_back({frame, t, what, z.id, z.center, z.k, population(z, cont)});
}

// Continuous agents that lose their core when zone `id` goes from its
// current k down to `trial`.
std::vector<AgentId> shed_agents(const Partition& trial, const ContinuousZone& old_zone,
                                 const std::vector<ContinuousAgent>& cont, double transit_width) {
    std::vector<AgentId> ids;
    const double reach = old_zone.radius() + transit_width;
    for (const auto& a : cont) {
        if (distance(a.position, old_zone.center) >= reach) continue;
        if (trial.region_of(a.position) != Region::Core) ids.push_back(a.id);
    }
    return ids;
}

void promote_inside_cores(const Partition& part, std::vector<ContinuousAgent>& cont,
                          std::vector<DiscreteAgent>& disc, Grid& grid, const SimParams& p, std::int64_t frame,
                          ZoomTick& out) {
    std::vector<AgentId> inside;
    for (const auto& a : disc) {
        if (part.in_core(grid.cell_center(a.cell))) inside.push_back(a.id);
    }
    promote(inside, disc, cont, grid, p, frame, out.transforms);
}

}  // namespace

int activate_zone(Partition& part, ContinuousZone z, std::vector<ContinuousAgent>& cont,
                  std::vector<DiscreteAgent>& disc, Grid& grid, const SimParams& p, std::int64_t frame,
                  double time_s, ZoomTick& out) {
    const double R = part.unit_radius();
    const double w = part.transit_width();
    z.created_frame = frame;
    bool merged_any = false;
    for (bool changed = true; changed;) {
        changed = false;
        for (const auto& other : part.zones()) {
            if (other.pinned) continue;
            if (distance(other.center, z.center) >= other.radius() + w + z.radius()) continue;
            const Circle merged = enclosing_circle(z.core(), other.core());
            const int k = static_cast<int>(std::ceil(merged.radius / R - 1e-9));
            if (k > part.k_max()) continue;
            z.center = merged.center;
            z.k = std::max(k, 1);
            z.created_frame = std::min(z.created_frame, other.created_frame);
            part.remove_zone(other.id);
            merged_any = true;
            changed = true;
            break;
        }
    }
    const int id = part.add_zone(z);
    promote_inside_cores(part, cont, disc, grid, p, frame, out);
    log_event(out, frame, time_s, merged_any ? "merged" : "created", *part.find(id), cont);
    return id;
}

ZoomTick zoom_tick(Partition& part, std::vector<ContinuousAgent>& cont, std::vector<DiscreteAgent>& disc,
                   Grid& grid, const std::vector<double>& rho, const SimParams& p, std::int64_t frame,
                   double time_s) {
    ZoomTick out;
    if (part.mode() != Mode::Hybrid) return out;
    const double thr = p.rho_thr_ped_m2;
    const double w = part.transit_width();

    std::vector<int> ids;
    for (const auto& z : part.zones()) if (!z.pinned) ids.push_back(z.id);
    for (int id : ids) {
        const ContinuousZone before = *part.find(id);
        const int target = zoom_out_target(grid, rho, before, thr);
        int k = before.k;
        bool blocked = false;
        while (k > target) {
            Partition trial = part;
            if (k - 1 == 0) {
                trial.remove_zone(id);
            } else {
                trial.find(id)->k = k - 1;
            }
            const ContinuousZone current = *part.find(id);
            const auto shed = shed_agents(trial, current, cont, w);
            if (!demote_all_in_place(shed, cont, disc, grid, trial, p, out.transforms)) {
                blocked = true;
                break;
            }
            part = std::move(trial);
            --k;
        }
        if (k == before.k && !blocked) continue;
        if (ContinuousZone* z = part.find(id)) {
            log_event(out, frame, time_s, blocked ? "shrink_blocked" : "shrunk", *z, cont);
        } else {
            ContinuousZone gone = before;
            gone.k = 0;
            log_event(out, frame, time_s, "dissolved", gone, cont);
        }
    }

    const int max_rounds = static_cast<int>(grid.size()) + 1;
    for (int round = 0; round < max_rounds; ++round) {
        const auto covered = part.core_cells(grid);
        auto pool = zoom_in_scan(grid, rho, thr, p.zoom_radius_m, &covered);
        if (pool.empty()) break;
        while (!pool.empty()) {
            const CellIndex c_star = pool.front().cell;
            if (part.in_core(grid.cell_center(c_star))) {
                pool.erase(pool.begin());
                continue;
            }
            const ZoneSize size = size_zone(grid, rho, c_star, thr, p.zoom_radius_m, p.k_max, &pool);
            ContinuousZone z;
            z.center = size.center;
            z.k = size.k;
            activate_zone(part, z, cont, disc, grid, p, frame, time_s, out);
        }
    }
    const auto covered = part.core_cells(grid);
    for (std::size_t i = 0; i < rho.size(); ++i) {
        if (rho[i] >= thr && !covered[i]) ++out.uncovered_hot_cells;
    }
    return out;
}

}  // namespace hped
