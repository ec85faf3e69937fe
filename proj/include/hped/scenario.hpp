#pragma once
// Static world description and simulation parameters, plus the JSON
// scenario format the CLI consumes. See docs/file_formats.md.

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "hped/geometry.hpp"

namespace hped {

class ScenarioError : public std::runtime_error {
public:
    enum class Kind { Parse, Validation, Io };
    ScenarioError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    Kind kind() const { return kind_; }

private:
    Kind kind_;
};

struct NamedRegion {
    std::string name;
    Polygon polygon;
    bool operator==(const NamedRegion&) const = default;
};

struct SpawnEntry {
    std::string origin;
    double rate_per_s{0.0};  ///< 0 means "all at start_s"
    int count{0};
    double start_s{0.0};
    bool operator==(const SpawnEntry&) const = default;
};

/// A continuous zone pinned by the scenario author; never zoomed out.
struct StaticZone {
    Vec2 center;
    int k{1};
    bool operator==(const StaticZone&) const = default;
};

struct Scenario {
    Polygon bounds;
    std::vector<Polygon> obstacles;
    std::vector<NamedRegion> origins;
    std::vector<NamedRegion> destinations;
    /// Row-stochastic, origins x destinations.
    std::vector<std::vector<double>> od_matrix;
    std::vector<SpawnEntry> spawn_schedule;
    std::vector<StaticZone> static_zones;

    int origin_index(const std::string& name) const;
    int destination_index(const std::string& name) const;
    bool operator==(const Scenario&) const = default;
};

struct SimParams {
    double dt_cont_s{0.01};
    double dt_disc_s{1.0};
    double v_max_mps{2.16};
    double v_desired_mean_mps{1.34};
    double v_desired_sd_mps{0.1};
    double torso_radius_m{0.23};
    double cell_edge_m{0.46};
    double rho_thr_ped_m2{1.5};
    double zoom_radius_m{2.0};
    int k_max{5};
    double density_window_s{2.0};
    double zoom_interval_s{2.0};
    double relaxation_time_s{0.5};
    double sf_A_mps2{26.67};
    double sf_B_m{0.06};
    double sf_kappa_kg_s2{2.4e5};
    double sf_k_kg_m_s{1.2e5};
    double mass_kg{75.0};
    double k_stock{2.0};
    /// <= 0 selects 1.05 * v_max * dt_disc.
    double transit_width_m{0.0};
    double route_inflation_m{0.3};
    double force_cutoff_m{2.0};

    double r_place() const { return v_max_mps * dt_disc_s; }
    double transit_width() const {
        return transit_width_m > 0.0 ? transit_width_m : 1.05 * v_max_mps * dt_disc_s;
    }
    std::int64_t dt_cont_us() const;
    std::int64_t dt_disc_us() const;
    bool operator==(const SimParams&) const = default;
};

struct LoadedScenario {
    Scenario scenario;
    SimParams params;
};

/// Throws ScenarioError(Validation) naming the first violated invariant.
void validate(const SimParams& p);
void validate(const Scenario& s);

LoadedScenario parse_scenario(const std::string& text);
LoadedScenario load_scenario(const std::filesystem::path& path);
std::string serialize_scenario(const Scenario& s, const SimParams& p);

/// Sets one SimParams field by its file key (e.g. "dt_disc_s").
void set_param(SimParams& p, const std::string& key, double value);
std::vector<std::string> param_keys();

enum class CellShape { Triangular, Quadratic, Hexagonal };

/// 1/A of the unit cell of the given shape and edge length.
double max_discrete_density(CellShape shape, double edge_m);

// Documented continuous-torso packing limits; not derived here.
inline constexpr double kMaxDensityCircularTorso = 5.46;
inline constexpr double kMaxDensityEllipticalTorso = 10.47;

}  // namespace hped
