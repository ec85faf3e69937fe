#pragma once
// Square-cell lattice underlying the discrete model.

#include <cstdint>
#include <optional>
#include <vector>

#include "hped/geometry.hpp"
#include "hped/scenario.hpp"

namespace hped {

using AgentId = std::int64_t;
inline constexpr AgentId kNoAgent = -1;

struct CellIndex {
    int m{0};  ///< row
    int n{0};  ///< column
    bool operator==(const CellIndex&) const = default;
    auto operator<=>(const CellIndex&) const = default;
};

enum class CellKind : std::uint8_t { Free, Obstacle, OccupiedDiscrete, VirtualPedestrian };

class Grid {
public:
    Grid() = default;
    Grid(Vec2 origin, double cell_edge, int rows, int cols);

    /// Lattice covering the scenario bounds; cells intersecting an obstacle
    /// or reaching outside the bounds are Obstacle.
    static Grid from_scenario(const Scenario& s, double cell_edge);

    Vec2 origin() const { return origin_; }
    double cell_edge() const { return edge_; }
    double cell_area() const { return edge_ * edge_; }
    int rows() const { return rows_; }
    int cols() const { return cols_; }
    std::size_t size() const { return kind_.size(); }

    bool in_range(const CellIndex& c) const { return c.m >= 0 && c.m < rows_ && c.n >= 0 && c.n < cols_; }
    std::size_t linear(const CellIndex& c) const { return static_cast<std::size_t>(c.m) * cols_ + c.n; }
    CellIndex from_linear(std::size_t i) const {
        return {static_cast<int>(i / cols_), static_cast<int>(i % cols_)};
    }

    /// Throws std::out_of_range for indices outside the lattice.
    Vec2 cell_center(const CellIndex& c) const;
    std::pair<Vec2, Vec2> cell_box(const CellIndex& c) const;
    Polygon cell_polygon(const CellIndex& c) const;

    /// Cell owning p; cells are closed on their low edges, open on their
    /// high edges.
    std::optional<CellIndex> cell_of(const Vec2& p) const;

    /// Cells whose center lies within `radius` of `center` (inclusive),
    /// ordered by linear index.
    std::vector<CellIndex> cells_in_disk(const Vec2& center, double radius) const;

    /// Cells whose open interior intersects the open disk.
    std::vector<CellIndex> cells_overlapping(const Circle& c) const;

    /// 4-neighborhood flood fill from seed, restricted to mask and skipping
    /// Obstacle cells. Throws std::invalid_argument if seed is not in mask.
    std::vector<CellIndex> reachable_cells(const CellIndex& seed, const std::vector<CellIndex>& mask) const;

    CellKind kind(const CellIndex& c) const { return kind_[linear(c)]; }
    AgentId occupant(const CellIndex& c) const { return occupant_[linear(c)]; }
    bool is_free(const CellIndex& c) const { return kind(c) == CellKind::Free; }
    bool is_obstacle(const CellIndex& c) const { return kind(c) == CellKind::Obstacle; }

    void set_obstacle(const CellIndex& c);
    /// Places a discrete agent; throws std::logic_error if the cell is not Free.
    void occupy(const CellIndex& c, AgentId id);
    /// Frees a cell held by `id`; throws std::logic_error on mismatch.
    void vacate(const CellIndex& c, AgentId id);
    /// Marks a Free cell as holding a virtual pedestrian; returns false if the
    /// cell was not Free.
    bool mark_virtual(const CellIndex& c, AgentId id);
    void clear_virtual();
    const std::vector<std::size_t>& virtual_cells() const { return virtual_cells_; }

    /// True iff no agent id occupies two cells.
    bool occupancy_unique() const;

private:
    Vec2 origin_;
    double edge_{1.0};
    int rows_{0};
    int cols_{0};
    std::vector<CellKind> kind_;
    std::vector<AgentId> occupant_;
    std::vector<std::size_t> virtual_cells_;
};

}  // namespace hped
