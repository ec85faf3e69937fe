#pragma once
// Cellular stock automaton for agents on the grid.

#include <random>
#include <vector>

#include "hped/continuous.hpp"
#include "hped/grid.hpp"
#include "hped/scenario.hpp"

namespace hped {

struct DiscreteAgent {
    AgentId id{kNoAgent};
    CellIndex cell;
    Vec2 velocity;
    double desired_speed{1.34};
    double stock{0.0};
    Route route;
    /// Set when the preferred next cell was refused by the forbidden mask
    /// (a continuous core) during the last step.
    bool held_at_core{false};
};

/// Waypoint switch radius for a discrete agent.
double discrete_waypoint_radius(const SimParams& p);

/// Advances every agent by dt in a random order drawn from rng. `forbidden`
/// (optional, indexed by Grid::linear) marks cells agents may not enter.
void step_discrete(std::vector<DiscreteAgent>& agents, Grid& grid, const SimParams& p, double dt,
                   std::mt19937_64& rng, const std::vector<char>* forbidden = nullptr);

/// Path length of a position history divided by T.
double realized_speed(const std::vector<Vec2>& history, double T);

}  // namespace hped
