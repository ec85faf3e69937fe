#pragma once
// Frame loop: spawning, model steps in clock order, transformation, zoom and
// metrics.

#include <cstdint>
#include <memory>
#include <random>
#include <vector>

#include "hped/clock.hpp"
#include "hped/continuous.hpp"
#include "hped/density.hpp"
#include "hped/discrete.hpp"
#include "hped/grid.hpp"
#include "hped/partition.hpp"
#include "hped/routing.hpp"
#include "hped/scenario.hpp"
#include "hped/transition.hpp"
#include "hped/zoom.hpp"

namespace hped {

struct RunOptions {
    Mode mode{Mode::Hybrid};
    std::uint64_t seed{1};
    double t_end_s{600.0};
    bool record_trajectories{true};
    /// Density matrices captured at every zoom-interval boundary.
    bool record_density_frames{false};
    /// Throw InvariantViolation on the first failed per-frame check.
    bool strict{true};
};

struct TrajectoryRow {
    double time_s;
    AgentId id;
    Vec2 position;
    char model;  ///< 'C' or 'D'
    int zone_id;  ///< -1 outside every zone
};

struct AgentExit {
    AgentId id;
    double spawn_s;
    double exit_s;
};

struct DensityFrame {
    double time_s;
    bool warming;
    std::vector<double> rho;
};

struct RunMetrics {
    double wall_seconds{0.0};
    double continuous_agent_seconds{0.0};
    double discrete_agent_seconds{0.0};
    std::int64_t frames{0};
    std::int64_t spawned{0};
    std::int64_t exited{0};
    std::int64_t promotions{0};
    std::int64_t demotions{0};
    std::int64_t deferrals{0};
    /// Continuous agents found in the discrete region that the
    /// transformation picked up (demoted or deferred).
    std::int64_t detected_crossings{0};
    /// Failed per-frame invariant checks (only nonzero when not strict).
    std::int64_t violations{0};
    std::int64_t max_zones{0};
};

struct RunResult {
    Grid grid;  ///< geometry of the lattice the run used
    std::vector<TrajectoryRow> trajectories;
    std::vector<TransformReport> reports;
    std::vector<ZoneEvent> zone_events;
    std::vector<AgentExit> exits;
    std::vector<DensityFrame> density_frames;
    RunMetrics metrics;
    double end_time_s{0.0};
    /// Every scheduled agent was spawned and has exited.
    bool completed{false};
};

class Simulation {
public:
    Simulation(const Scenario& s, const SimParams& p, const RunOptions& opt);

    /// Runs one discrete frame. Returns false once the run is over.
    bool step_frame();
    bool finished() const;
    RunResult take_result();

    std::int64_t frame() const { return frame_; }
    Micros now() const { return now_; }
    const std::vector<ContinuousAgent>& continuous() const { return cont_; }
    const std::vector<DiscreteAgent>& discrete() const { return disc_; }
    const Grid& grid() const { return grid_; }
    const Partition& partition() const { return part_; }
    Partition& partition() { return part_; }
    const DensityField& density() const { return density_; }
    const RunMetrics& metrics() const { return result_.metrics; }

    /// Checks conservation, representation and region invariants. Returns
    /// the list of failures (empty when consistent).
    std::vector<std::string> check_invariants(const TransformReport* last) const;

private:
    struct Pending {
        int origin;
        Micros time;
    };

    void spawn_due();
    bool try_spawn(int origin);
    void record_trajectories(double t);
    void check_exits_discrete(double t);
    void check_exits_continuous(double t);
    bool reached(const Route& r, const Vec2& p) const;
    void fail(const std::vector<std::string>& problems);

    Scenario scenario_;
    SimParams params_;
    RunOptions opt_;
    Grid grid_;
    Partition part_;
    DensityField density_;
    SocialForceModel sfm_;
    std::unique_ptr<Router> router_;
    AlignedSchedule clock_;
    std::mt19937_64 spawn_rng_;
    std::mt19937_64 step_rng_;
    std::vector<ContinuousAgent> cont_;
    std::vector<DiscreteAgent> disc_;
    std::vector<Pending> pending_;
    std::vector<double> spawn_time_;  // by agent id
    std::vector<std::pair<Vec2, Vec2>> dest_boxes_;
    AgentId next_id_{0};
    std::int64_t frame_{0};
    Micros now_{0};
    Micros t_end_;
    Micros zoom_every_;
    std::int64_t cont_step_{0};
    RunResult result_;
};

RunResult run(const Scenario& s, const SimParams& p, const RunOptions& opt);

/// Last exit time. Throws std::runtime_error if the run ended before every
/// agent left.
double escape_time(const RunResult& r);

Mode parse_mode(const std::string& name);
const char* mode_name(Mode m);

}  // namespace hped
