#pragma once
// Hand-over of agents between the two models inside transit areas.

#include <cstdint>
#include <vector>

#include "hped/continuous.hpp"
#include "hped/discrete.hpp"
#include "hped/grid.hpp"
#include "hped/partition.hpp"
#include "hped/scenario.hpp"

namespace hped {

/// Mean heading change per stride, radians.
inline constexpr double kStrideTurn = 12.3 * kPi / 180.0;

/// Stride length (m) at walking speed v (m/s).
inline double stride_length(double v) { return 0.234 + 0.302 * v; }

/// Region reachable within one discrete step. Stationary agents get a disk
/// of radius torso_radius.
CircularSector propagation_segment(const Vec2& position, const Vec2& velocity, const SimParams& p);

struct TransformReport {
    std::int64_t frame{0};
    double time_s{0.0};
    std::vector<AgentId> promoted;
    std::vector<AgentId> demoted;
    std::vector<AgentId> deferred;
    /// Per transformed agent (promotions and demotions), meters.
    std::vector<std::pair<AgentId, double>> displacement;
};

/// Marks every free cell overlapped by a continuous agent's torso whose
/// center is outside the continuous cores. Returns the number of marks.
int plant_virtual_pedestrians(const std::vector<ContinuousAgent>& agents, const Partition& part, Grid& grid);

/// Discrete agents the continuous model has to see this frame: those within
/// reach of a zone's transit annulus.
std::vector<StaticCircle> discrete_statics(const std::vector<DiscreteAgent>& agents, const Partition& part,
                                           const Grid& grid, const SimParams& p);

bool is_demotion_candidate(const Vec2& position, const Vec2& velocity, const Partition& part, const Scenario& s,
                           const SimParams& p);
bool is_promotion_candidate(const DiscreteAgent& a, const Grid& grid, const Partition& part, const SimParams& p);

struct DemotionCandidate {
    AgentId id{kNoAgent};
    Vec2 position;
    CircularSector segment;
    /// Transit area the candidate belongs to; fallback search runs per area.
    int area{0};
    /// Restrict the fallback search to the propagation segment.
    bool use_segment{true};
};

struct DemotionOutcome {
    struct Placement {
        AgentId id;
        CellIndex cell;
        double displacement;
        int stage;  ///< 1 = own cells, 3 = fallback search
    };
    std::vector<Placement> placed;
    std::vector<AgentId> deferred;
};

/// Staged cell assignment. A cell is available if the grid reports it Free
/// and `unavailable` (Grid::linear order, may be empty) does not mark it.
DemotionOutcome assign_demotions(const std::vector<DemotionCandidate>& candidates, const Grid& grid,
                                 const std::vector<char>& unavailable, double r_place, double torso_radius);

ContinuousAgent to_continuous(const DiscreteAgent& a, const Grid& grid, const SimParams& p);
DiscreteAgent to_discrete(const ContinuousAgent& a, const CellIndex& cell);

/// Promotes the listed discrete agents in place. Throws InvariantViolation
/// if an agent's cell is not held by it.
void promote(const std::vector<AgentId>& ids, std::vector<DiscreteAgent>& disc, std::vector<ContinuousAgent>& cont,
             Grid& grid, const SimParams& p, std::int64_t frame, TransformReport& report);

/// Full transformation at a frame boundary. Continuous positions are
/// extrapolated by gap_s for the candidate tests and the assignment.
TransformReport transform(std::vector<ContinuousAgent>& cont, std::vector<DiscreteAgent>& disc, Grid& grid,
                          const Partition& part, const Scenario& s, const SimParams& p, std::int64_t frame,
                          double gap_s);

/// Demotes the listed continuous agents from their current positions,
/// searching the r_place disk only. Agents that cannot be placed are listed
/// in the report's deferred set and left continuous. With dry_run the state
/// is untouched and only the report is produced.
TransformReport demote_in_place(const std::vector<AgentId>& ids, std::vector<ContinuousAgent>& cont,
                                std::vector<DiscreteAgent>& disc, Grid& grid, const Partition& part,
                                const SimParams& p, std::int64_t frame, bool dry_run = false);

/// All-or-nothing form of demote_in_place: applies the placements and
/// appends them to `report` only if no agent would defer.
bool demote_all_in_place(const std::vector<AgentId>& ids, std::vector<ContinuousAgent>& cont,
                         std::vector<DiscreteAgent>& disc, Grid& grid, const Partition& part, const SimParams& p,
                         TransformReport& report);

}  // namespace hped
