#pragma once
// Split of the scenario into continuous zones, their transit annuli and the
// discrete remainder.

#include <cstdint>
#include <vector>

#include "hped/geometry.hpp"
#include "hped/grid.hpp"

namespace hped {

enum class Region { Core, Transit, Discrete };
enum class Mode { Hybrid, PureContinuous, PureDiscrete };

struct ContinuousZone {
    bool operator==(const ContinuousZone&) const = default;

    int id{0};
    Vec2 center;
    int k{1};
    double unit_radius{2.0};
    std::int64_t created_frame{0};
    bool pinned{false};

    double radius() const { return k * unit_radius; }
    Circle core() const { return {center, radius()}; }
    Circle outer(double transit_width) const { return {center, radius() + transit_width}; }
};

/// Region lookup over a set of zones. A point is Core if it lies in any
/// zone disk, Transit if it lies in some annulus but no disk.
class Partition {
public:
    Partition() = default;
    Partition(Mode mode, double unit_radius, double transit_width, int k_max);

    Mode mode() const { return mode_; }
    double unit_radius() const { return unit_radius_; }
    double transit_width() const { return transit_width_; }
    int k_max() const { return k_max_; }

    const std::vector<ContinuousZone>& zones() const { return zones_; }
    std::vector<ContinuousZone>& zones() { return zones_; }
    ContinuousZone* find(int id);
    int add_zone(ContinuousZone z);  ///< assigns and returns a fresh id
    void remove_zone(int id);

    Region region_of(const Vec2& p) const;
    bool in_core(const Vec2& p) const;
    /// Id of the zone whose core or annulus contains p (nearest center wins),
    /// or -1.
    int zone_at(const Vec2& p) const;
    /// Index into zones() of the zone nearest to p, or -1 without zones.
    int nearest_zone(const Vec2& p) const;

    /// Per-cell mask (Grid::linear order) of cells whose center is Core.
    /// Cached until the zone set changes.
    const std::vector<char>& core_cells(const Grid& g) const;

private:
    Mode mode_{Mode::Hybrid};
    double unit_radius_{2.0};
    double transit_width_{2.3};
    int k_max_{5};
    int next_id_{1};
    std::vector<ContinuousZone> zones_;

    // Last core mask and the zone set and grid it was built for.
    mutable std::vector<ContinuousZone> mask_zones_;
    mutable std::vector<char> mask_;
    mutable const Grid* mask_grid_{nullptr};
    mutable std::size_t mask_cells_{0};
};

}  // namespace hped
