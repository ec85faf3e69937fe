#pragma once
// Density-driven creation, growth, shrinking and removal of continuous zones.

#include <cstdint>
#include <string>
#include <vector>

#include "hped/continuous.hpp"
#include "hped/discrete.hpp"
#include "hped/grid.hpp"
#include "hped/partition.hpp"
#include "hped/scenario.hpp"
#include "hped/transition.hpp"

namespace hped {

struct HotCell {
    CellIndex cell;
    double rho{0.0};
};

/// Greedy hotspot selection: the densest remaining cell is kept if its
/// density reaches `threshold`, then every cell within `influence` of it
/// leaves contention. `excluded` (optional, Grid::linear) removes cells
/// up front. Cell densities `rho` are in Grid::linear order.
std::vector<HotCell> zoom_in_scan(const Grid& g, const std::vector<double>& rho, double threshold, double influence,
                                  const std::vector<char>* excluded = nullptr);

/// Mean density of the obstacle-free cells whose centers lie within
/// `radius` of `point`; 0 for radius <= 0 or when no cell qualifies.
double local_density(const Grid& g, const std::vector<double>& rho, const Vec2& point, double radius);

/// Density-weighted center of the obstacle-free cells within `radius`.
/// Falls back to `point` when the weights vanish.
Vec2 density_center(const Grid& g, const std::vector<double>& rho, const Vec2& point, double radius);

struct ZoneSize {
    int k{1};
    Vec2 center;
};

/// Grows k from 1 while the local density around c* stays at or above the
/// threshold and k < k_max. Candidates of `pool` inside the final radius
/// are removed from it.
ZoneSize size_zone(const Grid& g, const std::vector<double>& rho, const CellIndex& c_star, double threshold,
                   double unit_radius, int k_max, std::vector<HotCell>* pool = nullptr);

/// Density of the k-th ring of a zone centered at `center`.
double ring_density(const Grid& g, const std::vector<double>& rho, const Vec2& center, double unit_radius, int k);

/// Largest k' <= k such that ring k' is at or above the threshold, or 0.
int zoom_out_target(const Grid& g, const std::vector<double>& rho, const ContinuousZone& z, double threshold);

struct ZoneEvent {
    std::int64_t frame{0};
    double time_s{0.0};
    std::string event;  ///< created, merged, shrunk, dissolved, shrink_blocked
    int zone_id{0};
    Vec2 center;
    int k{0};
    int population{0};
};

struct ZoomTick {
    std::vector<ZoneEvent> events;
    TransformReport transforms;
    /// Cells at or above the threshold that no core covers afterwards.
    int uncovered_hot_cells{0};
};

/// One zoom check: zoom-out of every unpinned zone, then zoom-in until every
/// hot cell lies in a core.
ZoomTick zoom_tick(Partition& part, std::vector<ContinuousAgent>& cont, std::vector<DiscreteAgent>& disc,
                   Grid& grid, const std::vector<double>& rho, const SimParams& p, std::int64_t frame,
                   double time_s);

/// Adds a zone, merging it with overlapping unpinned zones when the merged
/// disk fits within k_max, then promotes the discrete agents now inside a
/// core. Returns the id of the resulting zone.
int activate_zone(Partition& part, ContinuousZone z, std::vector<ContinuousAgent>& cont,
                  std::vector<DiscreteAgent>& disc, Grid& grid, const SimParams& p, std::int64_t frame,
                  double time_s, ZoomTick& out);

}  // namespace hped
