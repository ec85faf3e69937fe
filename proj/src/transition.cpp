#include "hped/transition.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <unordered_map>
#include <unordered_set>

#include "hped/assignment.hpp"
#include "hped/invariant.hpp"

namespace hped {

CircularSector propagation_segment(const Vec2& position, const Vec2& velocity, const SimParams& p) {
    const double speed = velocity.norm();
    if (speed <= 0.0) return {position, p.torso_radius_m, 0.0, kPi};
    const double turns = p.dt_disc_s * speed / stride_length(speed);
    return {position, p.r_place(), std::atan2(velocity.y, velocity.x), std::min(kPi, turns * kStrideTurn)};
}

int plant_virtual_pedestrians(const std::vector<ContinuousAgent>& agents, const Partition& part, Grid& grid) {
    if (part.mode() != Mode::Hybrid) return 0;
    int marked = 0;
    for (const auto& a : agents) {
        for (const auto& c : grid.cells_overlapping({a.position, a.radius})) {
            if (part.in_core(grid.cell_center(c))) continue;
            if (grid.mark_virtual(c, a.id)) ++marked;
        }
    }
    return marked;
}

std::vector<StaticCircle> discrete_statics(const std::vector<DiscreteAgent>& agents, const Partition& part,
                                           const Grid& grid, const SimParams& p) {
    std::vector<StaticCircle> out;
    if (part.mode() != Mode::Hybrid) return out;
    const double reach = part.transit_width() + p.force_cutoff_m;
    for (const auto& a : agents) {
        const Vec2 c = grid.cell_center(a.cell);
        for (const auto& z : part.zones()) {
            if (distance(c, z.center) < z.radius() + reach) {
                out.push_back({a.id, c, p.torso_radius_m});
                break;
            }
        }
    }
    return out;
}

bool is_demotion_candidate(const Vec2& position, const Vec2& velocity, const Partition& part, const Scenario& s,
                           const SimParams& p) {
    if (part.mode() != Mode::Hybrid) return false;
    if (part.region_of(position) == Region::Discrete) return true;
    if (velocity.norm() <= 0.0) return false;
    const CircularSector seg = propagation_segment(position, velocity, p);
    for (const auto& z : part.zones()) {
        if (sector_within_circle(seg, z.outer(part.transit_width()))) return false;
    }
    for (const auto& q : sector_sample_points(seg, 6, 16)) {
        if (part.region_of(q) != Region::Discrete) continue;
        if (!point_in_polygon(q, s.bounds)) continue;
        bool in_obstacle = false;
        for (const auto& o : s.obstacles) {
            if (point_in_polygon(q, o)) {
                in_obstacle = true;
                break;
            }
        }
        if (!in_obstacle) return true;
    }
    return false;
}

bool is_promotion_candidate(const DiscreteAgent& a, const Grid& grid, const Partition& part, const SimParams& p) {
    if (part.mode() != Mode::Hybrid) return false;
    if (a.held_at_core) return true;
    if (a.velocity.norm() <= 0.0) return false;
    const CircularSector seg = propagation_segment(grid.cell_center(a.cell), a.velocity, p);
    for (const auto& z : part.zones()) {
        if (sector_region_intersects(seg, z.core())) return true;
    }
    return false;
}

DemotionOutcome assign_demotions(const std::vector<DemotionCandidate>& candidates, const Grid& grid,
                                 const std::vector<char>& unavailable, double r_place, double torso_radius) {
    DemotionOutcome out;
    std::vector<char> taken(grid.size(), 0);
    auto available = [&](const CellIndex& c) {
        if (!grid.in_range(c) || !grid.is_free(c)) return false;
        const std::size_t i = grid.linear(c);
        return !taken[i] && (unavailable.empty() || !unavailable[i]);
    };

    // Own cells: optimal matching of candidates to the free cells their torso covers.
    std::vector<std::vector<CellIndex>> own(candidates.size());
    std::map<CellIndex, std::size_t> column;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        for (const auto& c : grid.cells_overlapping({candidates[i].position, torso_radius})) {
            if (!available(c) || distance(grid.cell_center(c), candidates[i].position) > r_place) continue;
            own[i].push_back(c);
            column.emplace(c, 0);
        }
    }
    std::vector<CellIndex> cells;
    for (auto& [c, idx] : column) {
        idx = cells.size();
        cells.push_back(c);
    }
    std::vector<std::vector<double>> cost(candidates.size(), std::vector<double>(cells.size(), kForbidden));
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        for (const auto& c : own[i]) cost[i][column[c]] = distance(grid.cell_center(c), candidates[i].position);
    }
    const auto match = min_cost_max_matching(cost, cells.size());
    std::vector<std::size_t> rest;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        if (match[i] < 0) {
            rest.push_back(i);
            continue;
        }
        const CellIndex c = cells[match[i]];
        taken[grid.linear(c)] = 1;
        out.placed.push_back({candidates[i].id, c, cost[i][match[i]], 1});
    }

    // Fallback: reachable cells within r_place, fewest options first, per area.
    std::map<int, std::vector<std::size_t>> by_area;
    std::unordered_map<std::size_t, std::vector<CellIndex>> reach;
    for (std::size_t i : rest) {
        const DemotionCandidate& d = candidates[i];
        by_area[d.area].push_back(i);
        const auto seed = grid.cell_of(d.position);
        if (!seed) continue;
        std::vector<CellIndex> mask;
        for (const auto& c : grid.cells_in_disk(d.position, r_place)) {
            if (!d.use_segment || point_in_sector(grid.cell_center(c), d.segment)) mask.push_back(c);
        }
        if (std::find(mask.begin(), mask.end(), *seed) == mask.end()) mask.push_back(*seed);
        std::vector<CellIndex> r;
        for (const auto& c : grid.reachable_cells(*seed, mask)) {
            if (distance(grid.cell_center(c), d.position) <= r_place) r.push_back(c);
        }
        reach[i] = std::move(r);
    }
    for (auto& [area, members] : by_area) {
        std::vector<std::size_t> pending = members;
        for (;;) {
            std::size_t best = pending.size();
            std::size_t best_count = 0;
            double best_dist = 0.0;
            CellIndex best_cell{};
            for (std::size_t k = 0; k < pending.size(); ++k) {
                const std::size_t i = pending[k];
                std::size_t count = 0;
                double nearest = std::numeric_limits<double>::infinity();
                CellIndex nearest_cell{};
                for (const auto& c : reach[i]) {
                    if (!available(c)) continue;
                    ++count;
                    const double dd = distance(grid.cell_center(c), candidates[i].position);
                    if (dd < nearest - 1e-12 || (dd <= nearest + 1e-12 && grid.linear(c) < grid.linear(nearest_cell))) {
                        nearest = dd;
                        nearest_cell = c;
                    }
                }
                if (count == 0) continue;
                const bool better = best == pending.size() || count < best_count ||
                                    (count == best_count &&
                                     (nearest < best_dist - 1e-12 ||
                                      (nearest <= best_dist + 1e-12 && candidates[i].id < candidates[pending[best]].id)));
                if (better) {
                    best = k;
                    best_count = count;
                    best_dist = nearest;
                    best_cell = nearest_cell;
                }
            }
            if (best == pending.size()) break;
            const std::size_t i = pending[best];
            taken[grid.linear(best_cell)] = 1;
            out.placed.push_back({candidates[i].id, best_cell, best_dist, 3});
            pending.erase(pending.begin() + static_cast<std::ptrdiff_t>(best));
        }
        for (std::size_t i : pending) out.deferred.push_back(candidates[i].id);
    }
    std::sort(out.deferred.begin(), out.deferred.end());
    return out;
}

ContinuousAgent to_continuous(const DiscreteAgent& a, const Grid& grid, const SimParams& p) {
    ContinuousAgent c;
    c.id = a.id;
    c.position = grid.cell_center(a.cell);
    c.velocity = a.velocity;
    c.radius = p.torso_radius_m;
    c.desired_speed = a.desired_speed;
    c.mass = p.mass_kg;
    c.route = a.route;
    return c;
}

DiscreteAgent to_discrete(const ContinuousAgent& a, const CellIndex& cell) {
    DiscreteAgent d;
    d.id = a.id;
    d.cell = cell;
    d.velocity = a.velocity;
    d.desired_speed = a.desired_speed;
    d.stock = 0.0;
    d.route = a.route;
    return d;
}

void promote(const std::vector<AgentId>& ids, std::vector<DiscreteAgent>& disc, std::vector<ContinuousAgent>& cont,
             Grid& grid, const SimParams& p, std::int64_t frame, TransformReport& report) {
    if (ids.empty()) return;
    const std::unordered_set<AgentId> wanted(ids.begin(), ids.end());
    std::vector<DiscreteAgent> keep;
    keep.reserve(disc.size());
    for (auto& a : disc) {
        if (!wanted.count(a.id)) {
            keep.push_back(std::move(a));
            continue;
        }
        if (grid.kind(a.cell) != CellKind::OccupiedDiscrete || grid.occupant(a.cell) != a.id) {
            throw InvariantViolation(frame, "promotion cell contested for agent " + std::to_string(a.id));
        }
        grid.vacate(a.cell, a.id);
        cont.push_back(to_continuous(a, grid, p));
        report.promoted.push_back(a.id);
        report.displacement.push_back({a.id, 0.0});
    }
    disc = std::move(keep);
}

namespace {

std::vector<char> unavailable_mask(const std::vector<ContinuousAgent>& cont, const std::vector<Vec2>& positions,
                                   const std::unordered_set<AgentId>& candidates, const Grid& grid,
                                   const Partition& part) {
    std::vector<char> mask = part.core_cells(grid);
    for (std::size_t i = 0; i < cont.size(); ++i) {
        if (candidates.count(cont[i].id)) continue;
        for (const auto& c : grid.cells_overlapping({positions[i], cont[i].radius})) mask[grid.linear(c)] = 1;
    }
    return mask;
}

void apply_demotions(const DemotionOutcome& outcome, std::vector<ContinuousAgent>& cont,
                     std::vector<DiscreteAgent>& disc, Grid& grid, TransformReport& report) {
    std::unordered_map<AgentId, const DemotionOutcome::Placement*> placed;
    for (const auto& pl : outcome.placed) placed[pl.id] = &pl;
    std::vector<ContinuousAgent> keep;
    keep.reserve(cont.size());
    for (auto& a : cont) {
        const auto it = placed.find(a.id);
        if (it == placed.end()) {
            keep.push_back(std::move(a));
            continue;
        }
        grid.occupy(it->second->cell, a.id);
        disc.push_back(to_discrete(a, it->second->cell));
        report.demoted.push_back(a.id);
        report.displacement.push_back({a.id, it->second->displacement});
    }
    cont = std::move(keep);
    report.deferred.insert(report.deferred.end(), outcome.deferred.begin(), outcome.deferred.end());
}

}  // namespace

TransformReport transform(std::vector<ContinuousAgent>& cont, std::vector<DiscreteAgent>& disc, Grid& grid,
                          const Partition& part, const Scenario& s, const SimParams& p, std::int64_t frame,
                          double gap_s) {
    TransformReport report;
    report.frame = frame;
    if (part.mode() != Mode::Hybrid) return report;

    std::vector<AgentId> up;
    for (const auto& a : disc) {
        if (is_promotion_candidate(a, grid, part, p)) up.push_back(a.id);
    }
    promote(up, disc, cont, grid, p, frame, report);

    std::vector<Vec2> star(cont.size());
    std::vector<DemotionCandidate> candidates;
    std::unordered_set<AgentId> candidate_ids;
    for (std::size_t i = 0; i < cont.size(); ++i) {
        star[i] = extrapolate_position(cont[i], gap_s);
        if (is_demotion_candidate(star[i], cont[i].velocity, part, s, p)) {
            candidates.push_back({cont[i].id, star[i], propagation_segment(star[i], cont[i].velocity, p),
                                  part.nearest_zone(star[i]), true});
            candidate_ids.insert(cont[i].id);
        }
    }
    if (candidates.empty()) return report;
    const auto mask = unavailable_mask(cont, star, candidate_ids, grid, part);
    const auto outcome = assign_demotions(candidates, grid, mask, p.r_place(), p.torso_radius_m);
    apply_demotions(outcome, cont, disc, grid, report);
    return report;
}

namespace {

DemotionOutcome plan_in_place(const std::vector<AgentId>& ids, const std::vector<ContinuousAgent>& cont,
                              const Grid& grid, const Partition& part, const SimParams& p) {
    const std::unordered_set<AgentId> wanted(ids.begin(), ids.end());
    std::vector<Vec2> pos(cont.size());
    std::vector<DemotionCandidate> candidates;
    for (std::size_t i = 0; i < cont.size(); ++i) {
        pos[i] = cont[i].position;
        if (wanted.count(cont[i].id)) {
            candidates.push_back({cont[i].id, pos[i], CircularSector{}, part.nearest_zone(pos[i]), false});
        }
    }
    const auto mask = unavailable_mask(cont, pos, wanted, grid, part);
    return assign_demotions(candidates, grid, mask, p.r_place(), p.torso_radius_m);
}

}  // namespace

TransformReport demote_in_place(const std::vector<AgentId>& ids, std::vector<ContinuousAgent>& cont,
                                std::vector<DiscreteAgent>& disc, Grid& grid, const Partition& part,
                                const SimParams& p, std::int64_t frame, bool dry_run) {
    TransformReport report;
    report.frame = frame;
    if (ids.empty()) return report;
    const auto outcome = plan_in_place(ids, cont, grid, part, p);
    if (dry_run) {
        for (const auto& pl : outcome.placed) {
            report.demoted.push_back(pl.id);
            report.displacement.push_back({pl.id, pl.displacement});
        }
        report.deferred = outcome.deferred;
        return report;
    }
    apply_demotions(outcome, cont, disc, grid, report);
    return report;
}

bool demote_all_in_place(const std::vector<AgentId>& ids, std::vector<ContinuousAgent>& cont,
                         std::vector<DiscreteAgent>& disc, Grid& grid, const Partition& part, const SimParams& p,
                         TransformReport& report) {
    if (ids.empty()) return true;
    const auto outcome = plan_in_place(ids, cont, grid, part, p);
    if (!outcome.deferred.empty()) return false;
    apply_demotions(outcome, cont, disc, grid, report);
    return true;
}

}  // namespace hped
