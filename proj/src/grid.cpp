#include "hped/grid.hpp"

#include <algorithm>
#include <deque>
#include <stdexcept>
#include <unordered_set>

namespace hped {

Grid::Grid(Vec2 origin, double cell_edge, int rows, int cols)
    : origin_(origin), edge_(cell_edge), rows_(rows), cols_(cols),
      kind_(static_cast<std::size_t>(rows) * cols, CellKind::Free),
      occupant_(static_cast<std::size_t>(rows) * cols, kNoAgent) {
    if (cell_edge <= 0.0 || rows < 0 || cols < 0) throw std::invalid_argument("invalid grid dimensions");
}

Grid Grid::from_scenario(const Scenario& s, double cell_edge) {
    const auto [lo, hi] = s.bounds.bounds();
    const int cols = static_cast<int>(std::ceil((hi.x - lo.x) / cell_edge - 1e-9));
    const int rows = static_cast<int>(std::ceil((hi.y - lo.y) / cell_edge - 1e-9));
    Grid g(lo, cell_edge, rows, cols);
    const double full = cell_edge * cell_edge;
    const double tiny = 1e-9 * full;
    for (int m = 0; m < rows; ++m) {
        for (int n = 0; n < cols; ++n) {
            const CellIndex c{m, n};
            const Polygon cell = g.cell_polygon(c);
            if (intersection_area_convex(s.bounds, cell) < full - tiny) g.set_obstacle(c);
        }
    }
    for (const auto& ob : s.obstacles) {
        const auto [olo, ohi] = ob.bounds();
        const int m0 = std::max(0, static_cast<int>(std::floor((olo.y - lo.y) / cell_edge)) - 1);
        const int m1 = std::min(rows - 1, static_cast<int>(std::floor((ohi.y - lo.y) / cell_edge)) + 1);
        const int n0 = std::max(0, static_cast<int>(std::floor((olo.x - lo.x) / cell_edge)) - 1);
        const int n1 = std::min(cols - 1, static_cast<int>(std::floor((ohi.x - lo.x) / cell_edge)) + 1);
        for (int m = m0; m <= m1; ++m) {
            for (int n = n0; n <= n1; ++n) {
                const CellIndex c{m, n};
                if (g.is_obstacle(c)) continue;
                if (intersection_area_convex(ob, g.cell_polygon(c)) > tiny) g.set_obstacle(c);
            }
        }
    }
    return g;
}

Vec2 Grid::cell_center(const CellIndex& c) const {
    if (!in_range(c)) throw std::out_of_range("cell index out of range");
    return {origin_.x + (c.n + 0.5) * edge_, origin_.y + (c.m + 0.5) * edge_};
}

std::pair<Vec2, Vec2> Grid::cell_box(const CellIndex& c) const {
    const Vec2 lo{origin_.x + c.n * edge_, origin_.y + c.m * edge_};
    return {lo, {lo.x + edge_, lo.y + edge_}};
}

Polygon Grid::cell_polygon(const CellIndex& c) const {
    const auto [lo, hi] = cell_box(c);
    return make_rect(lo, hi);
}

std::optional<CellIndex> Grid::cell_of(const Vec2& p) const {
    const double fx = (p.x - origin_.x) / edge_;
    const double fy = (p.y - origin_.y) / edge_;
    if (!(fx >= 0.0) || !(fy >= 0.0)) return std::nullopt;
    const CellIndex c{static_cast<int>(std::floor(fy)), static_cast<int>(std::floor(fx))};
    if (!in_range(c)) return std::nullopt;
    return c;
}

std::vector<CellIndex> Grid::cells_in_disk(const Vec2& center, double radius) const {
    std::vector<CellIndex> out;
    if (radius < 0.0) return out;
    const int m0 = std::max(0, static_cast<int>(std::floor((center.y - radius - origin_.y) / edge_ - 0.5)));
    const int m1 = std::min(rows_ - 1, static_cast<int>(std::ceil((center.y + radius - origin_.y) / edge_ - 0.5)));
    const int n0 = std::max(0, static_cast<int>(std::floor((center.x - radius - origin_.x) / edge_ - 0.5)));
    const int n1 = std::min(cols_ - 1, static_cast<int>(std::ceil((center.x + radius - origin_.x) / edge_ - 0.5)));
    const double r2 = radius * radius;
    for (int m = m0; m <= m1; ++m) {
        for (int n = n0; n <= n1; ++n) {
            const Vec2 cc{origin_.x + (n + 0.5) * edge_, origin_.y + (m + 0.5) * edge_};
            if ((cc - center).norm2() <= r2 + 1e-12) out.push_back({m, n});
        }
    }
    return out;
}

std::vector<CellIndex> Grid::cells_overlapping(const Circle& c) const {
    std::vector<CellIndex> out;
    const double r = c.radius;
    const int m0 = std::max(0, static_cast<int>(std::floor((c.center.y - r - origin_.y) / edge_)));
    const int m1 = std::min(rows_ - 1, static_cast<int>(std::floor((c.center.y + r - origin_.y) / edge_)));
    const int n0 = std::max(0, static_cast<int>(std::floor((c.center.x - r - origin_.x) / edge_)));
    const int n1 = std::min(cols_ - 1, static_cast<int>(std::floor((c.center.x + r - origin_.x) / edge_)));
    for (int m = m0; m <= m1; ++m) {
        for (int n = n0; n <= n1; ++n) {
            const auto [lo, hi] = cell_box({m, n});
            if (circle_box_overlap(c, lo, hi)) out.push_back({m, n});
        }
    }
    return out;
}

std::vector<CellIndex> Grid::reachable_cells(const CellIndex& seed, const std::vector<CellIndex>& mask) const {
    std::unordered_set<std::size_t> allowed;
    allowed.reserve(mask.size() * 2);
    for (const auto& c : mask) if (in_range(c)) allowed.insert(linear(c));
    if (!in_range(seed) || !allowed.count(linear(seed))) throw std::invalid_argument("seed not in mask");
    std::vector<CellIndex> out;
    if (is_obstacle(seed)) return out;
    std::unordered_set<std::size_t> seen{linear(seed)};
    std::deque<CellIndex> queue{seed};
    constexpr int dm[4] = {1, -1, 0, 0};
    constexpr int dn[4] = {0, 0, 1, -1};
    while (!queue.empty()) {
        const CellIndex c = queue.front();
        queue.pop_front();
        out.push_back(c);
        for (int k = 0; k < 4; ++k) {
            const CellIndex nb{c.m + dm[k], c.n + dn[k]};
            if (!in_range(nb)) continue;
            const std::size_t li = linear(nb);
            if (!allowed.count(li) || seen.count(li) || is_obstacle(nb)) continue;
            seen.insert(li);
            queue.push_back(nb);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

void Grid::set_obstacle(const CellIndex& c) {
    const std::size_t i = linear(c);
    kind_[i] = CellKind::Obstacle;
    occupant_[i] = kNoAgent;
}

void Grid::occupy(const CellIndex& c, AgentId id) {
    const std::size_t i = linear(c);
    if (kind_[i] != CellKind::Free) throw std::logic_error("occupy: cell not free");
    kind_[i] = CellKind::OccupiedDiscrete;
    occupant_[i] = id;
}

void Grid::vacate(const CellIndex& c, AgentId id) {
    const std::size_t i = linear(c);
    if (kind_[i] != CellKind::OccupiedDiscrete || occupant_[i] != id) throw std::logic_error("vacate: cell not held by agent");
    kind_[i] = CellKind::Free;
    occupant_[i] = kNoAgent;
}

bool Grid::mark_virtual(const CellIndex& c, AgentId id) {
    const std::size_t i = linear(c);
    if (kind_[i] != CellKind::Free) return false;
    kind_[i] = CellKind::VirtualPedestrian;
    occupant_[i] = id;
    virtual_cells_.push_back(i);
    return true;
}

void Grid::clear_virtual() {
    for (std::size_t i : virtual_cells_) {
        if (kind_[i] == CellKind::VirtualPedestrian) {
            kind_[i] = CellKind::Free;
            occupant_[i] = kNoAgent;
        }
    }
    virtual_cells_.clear();
}

bool Grid::occupancy_unique() const {
    std::unordered_set<AgentId> seen;
    for (std::size_t i = 0; i < kind_.size(); ++i) {
        if (kind_[i] == CellKind::OccupiedDiscrete && !seen.insert(occupant_[i]).second) return false;
    }
    return true;
}

}  // namespace hped
