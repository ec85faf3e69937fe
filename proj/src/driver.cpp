#include "hped/driver.hpp"

#include <algorithm>
#include <chrono>
#include <stdexcept>
#include <unordered_set>

#include "hped/invariant.hpp"

namespace hped {

Mode parse_mode(const std::string& name) {
    if (name == "hybrid") return Mode::Hybrid;
    if (name == "pure-continuous") return Mode::PureContinuous;
    if (name == "pure-discrete") return Mode::PureDiscrete;
    throw std::invalid_argument("unknown mode: " + name);
}

const char* mode_name(Mode m) {
    switch (m) {
        case Mode::Hybrid: return "hybrid";
        case Mode::PureContinuous: return "pure-continuous";
        case Mode::PureDiscrete: return "pure-discrete";
    }
    return "?";
}

namespace {

std::vector<Vec2> destination_centroids(const Scenario& s) {
    std::vector<Vec2> out;
    for (const auto& d : s.destinations) out.push_back(d.polygon.centroid());
    return out;
}

void merge_report(TransformReport& into, const TransformReport& from) {
    into.promoted.insert(into.promoted.end(), from.promoted.begin(), from.promoted.end());
    into.demoted.insert(into.demoted.end(), from.demoted.begin(), from.demoted.end());
    into.deferred.insert(into.deferred.end(), from.deferred.begin(), from.deferred.end());
    into.displacement.insert(into.displacement.end(), from.displacement.begin(), from.displacement.end());
}

}  // namespace

Simulation::Simulation(const Scenario& s, const SimParams& p, const RunOptions& opt)
    : scenario_(s),
      params_(p),
      opt_(opt),
      grid_((validate(p), validate(s), Grid::from_scenario(s, p.cell_edge_m))),
      part_(opt.mode, p.zoom_radius_m, p.transit_width(), p.k_max),
      density_(grid_, to_micros(p.density_window_s)),
      sfm_(s, p),
      router_(std::make_unique<Router>(build_visibility_graph(s, p.route_inflation_m), destination_centroids(s))),
      clock_(p.dt_disc_us(), p.dt_cont_us()),
      spawn_rng_(opt.seed),
      step_rng_(opt.seed ^ 0x9e3779b97f4a7c15ULL),
      t_end_(to_micros(opt.t_end_s)),
      zoom_every_(to_micros(p.zoom_interval_s)) {
    for (const auto& d : s.destinations) dest_boxes_.push_back(d.polygon.bounds());
    if (opt.mode == Mode::Hybrid) {
        for (const auto& sz : s.static_zones) {
            ContinuousZone z;
            z.center = sz.center;
            z.k = sz.k;
            z.pinned = true;
            const int id = part_.add_zone(z);
            result_.zone_events.push_back({0, 0.0, "created", id, sz.center, sz.k, 0});
        }
    }
    for (const auto& e : s.spawn_schedule) {
        const int o = s.origin_index(e.origin);
        const Micros start = to_micros(e.start_s);
        for (int i = 0; i < e.count; ++i) {
            const Micros t = e.rate_per_s > 0.0 ? start + to_micros(i / e.rate_per_s) : start;
            pending_.push_back({o, t});
        }
    }
    std::stable_sort(pending_.begin(), pending_.end(),
                     [](const Pending& a, const Pending& b) { return a.time < b.time; });
    result_.metrics.max_zones = static_cast<std::int64_t>(part_.zones().size());
}

bool Simulation::finished() const {
    if (now_ >= t_end_) return true;
    return pending_.empty() && cont_.empty() && disc_.empty();
}

bool Simulation::reached(const Route& r, const Vec2& p) const {
    if (r.destination < 0) return false;
    const Polygon& poly = scenario_.destinations[r.destination].polygon;
    const double reach = 2.0 * params_.torso_radius_m;
    if ((p - router_->targets()[r.destination]).norm2() <= reach * reach) return true;
    const auto& [lo, hi] = dest_boxes_[r.destination];
    if (p.x < lo.x - kEps || p.x > hi.x + kEps || p.y < lo.y - kEps || p.y > hi.y + kEps) return false;
    return point_in_polygon(p, poly);
}

bool Simulation::try_spawn(int origin) {
    const Polygon& poly = scenario_.origins[origin].polygon;
    const auto [lo, hi] = poly.bounds();
    std::uniform_real_distribution<double> ux(lo.x, hi.x), uy(lo.y, hi.y);
    const double r = params_.torso_radius_m;
    for (int attempt = 0; attempt < 200; ++attempt) {
        const Vec2 p{ux(spawn_rng_), uy(spawn_rng_)};
        if (!point_in_polygon(p, poly)) continue;
        const Region region = part_.region_of(p);
        if (region == Region::Transit) continue;
        Vec2 pos = p;
        std::optional<CellIndex> cell;
        if (region == Region::Core) {
            if (!sfm_.position_valid(p)) continue;
            if (point_polygon_boundary_distance(p, scenario_.bounds) < r) continue;
            bool clear = true;
            for (const auto& o : scenario_.obstacles) {
                if (point_polygon_distance(p, o) < r) {
                    clear = false;
                    break;
                }
            }
            for (const auto& a : cont_) {
                if (clear && (a.position - p).norm2() < 4 * r * r) clear = false;
            }
            for (const auto& d : disc_) {
                if (clear && (grid_.cell_center(d.cell) - p).norm2() < 4 * r * r) clear = false;
            }
            if (!clear) continue;
        } else {
            cell = grid_.cell_of(p);
            if (!cell || !grid_.is_free(*cell)) continue;
            pos = grid_.cell_center(*cell);
            if (part_.region_of(pos) != Region::Discrete) continue;
            bool clear = true;
            for (const auto& a : cont_) {
                if ((a.position - pos).norm2() < 4 * r * r) {
                    clear = false;
                    break;
                }
            }
            if (!clear) continue;
        }

        const int dest = assign_destination(scenario_, origin, spawn_rng_);
        std::normal_distribution<double> speed(params_.v_desired_mean_mps, params_.v_desired_sd_mps);
        double v = speed(spawn_rng_);
        for (int k = 0; k < 100 && (v < 0.5 || v > params_.v_max_mps); ++k) v = speed(spawn_rng_);
        v = std::clamp(v, std::min(0.5, params_.v_max_mps), params_.v_max_mps);

        Route route;
        route.waypoints = router_->route(pos, static_cast<std::size_t>(dest));
        route.next = 1;
        route.destination = dest;
        const AgentId id = next_id_++;
        spawn_time_.push_back(to_seconds(now_));
        if (cell) {
            DiscreteAgent a;
            a.id = id;
            a.cell = *cell;
            a.desired_speed = v;
            a.route = std::move(route);
            grid_.occupy(*cell, id);
            disc_.push_back(std::move(a));
        } else {
            ContinuousAgent a;
            a.id = id;
            a.position = pos;
            a.radius = r;
            a.desired_speed = v;
            a.mass = params_.mass_kg;
            a.route = std::move(route);
            cont_.push_back(std::move(a));
        }
        ++result_.metrics.spawned;
        return true;
    }
    return false;
}

void Simulation::spawn_due() {
    std::vector<Pending> later;
    for (const auto& pd : pending_) {
        if (pd.time > now_ || !try_spawn(pd.origin)) later.push_back(pd);
    }
    pending_ = std::move(later);
}

void Simulation::check_exits_discrete(double t) {
    std::vector<DiscreteAgent> keep;
    keep.reserve(disc_.size());
    for (auto& a : disc_) {
        if (reached(a.route, grid_.cell_center(a.cell))) {
            grid_.vacate(a.cell, a.id);
            result_.exits.push_back({a.id, spawn_time_[a.id], t});
            ++result_.metrics.exited;
        } else {
            keep.push_back(std::move(a));
        }
    }
    disc_ = std::move(keep);
}

void Simulation::check_exits_continuous(double t) {
    std::size_t w = 0;
    for (std::size_t i = 0; i < cont_.size(); ++i) {
        if (reached(cont_[i].route, cont_[i].position)) {
            result_.exits.push_back({cont_[i].id, spawn_time_[cont_[i].id], t});
            ++result_.metrics.exited;
        } else {
            if (w != i) cont_[w] = std::move(cont_[i]);
            ++w;
        }
    }
    cont_.resize(w);
}

void Simulation::record_trajectories(double t) {
    if (!opt_.record_trajectories) return;
    for (const auto& a : cont_) {
        result_.trajectories.push_back({t, a.id, a.position, 'C', part_.zone_at(a.position)});
    }
    for (const auto& a : disc_) {
        const Vec2 c = grid_.cell_center(a.cell);
        result_.trajectories.push_back({t, a.id, c, 'D', part_.zone_at(c)});
    }
}

std::vector<std::string> Simulation::check_invariants(const TransformReport* last) const {
    std::vector<std::string> problems;
    std::unordered_set<AgentId> ids;
    for (const auto& a : cont_) {
        if (!ids.insert(a.id).second) problems.push_back("duplicate agent id " + std::to_string(a.id));
    }
    for (const auto& a : disc_) {
        if (!ids.insert(a.id).second) problems.push_back("agent " + std::to_string(a.id) + " has two representations");
    }
    const auto& m = result_.metrics;
    if (static_cast<std::int64_t>(cont_.size() + disc_.size()) + m.exited != m.spawned) {
        problems.push_back("agent count not conserved");
    }
    std::size_t occupied = 0;
    for (std::size_t i = 0; i < grid_.size(); ++i) {
        if (grid_.kind(grid_.from_linear(i)) == CellKind::OccupiedDiscrete) ++occupied;
    }
    if (occupied != disc_.size()) problems.push_back("occupied cells do not match discrete agents");
    if (grid_.virtual_cells().size() != 0) problems.push_back("virtual pedestrians outlived the frame");
    for (const auto& a : disc_) {
        if (grid_.kind(a.cell) != CellKind::OccupiedDiscrete || grid_.occupant(a.cell) != a.id) {
            problems.push_back("discrete agent " + std::to_string(a.id) + " does not hold its cell");
        }
        if (part_.region_of(grid_.cell_center(a.cell)) == Region::Core) {
            problems.push_back("discrete agent " + std::to_string(a.id) + " inside a continuous core");
        }
        if (a.stock < 0.0) problems.push_back("negative stock");
    }
    std::unordered_set<AgentId> deferred;
    if (last) deferred.insert(last->deferred.begin(), last->deferred.end());
    for (const auto& a : cont_) {
        if (a.velocity.norm() > params_.v_max_mps * (1.0 + 1e-12)) problems.push_back("speed above v_max");
        if (!sfm_.position_valid(a.position)) {
            problems.push_back("continuous agent " + std::to_string(a.id) + " outside free space");
        }
        if (part_.region_of(a.position) == Region::Discrete && !deferred.count(a.id)) {
            problems.push_back("continuous agent " + std::to_string(a.id) + " in discrete region untransformed");
        }
    }
    return problems;
}

void Simulation::fail(const std::vector<std::string>& problems) {
    if (problems.empty()) return;
    if (opt_.strict) {
        std::string msg = problems.front();
        if (problems.size() > 1) msg += " (+" + std::to_string(problems.size() - 1) + " more)";
        throw InvariantViolation(frame_, msg);
    }
    result_.metrics.violations += static_cast<std::int64_t>(problems.size());
}

bool Simulation::step_frame() {
    if (finished()) return false;
    const Micros t0 = now_;
    frame_ = clock_.next_frame();
    spawn_due();

    TransformReport report;
    report.frame = frame_;
    // First frame boundary at or after each multiple of the zoom interval.
    const bool tick = t0 > 0 && zoom_every_ > 0 && t0 / zoom_every_ != (t0 - clock_.dt_disc()) / zoom_every_;
    if (tick && opt_.mode == Mode::Hybrid && density_.warm(t0)) {
        const auto snap = density_.snapshot(t0);
        auto z = zoom_tick(part_, cont_, disc_, grid_, snap.rho, params_, frame_, to_seconds(t0));
        result_.zone_events.insert(result_.zone_events.end(), z.events.begin(), z.events.end());
        merge_report(report, z.transforms);
        if (z.uncovered_hot_cells > 0) fail({"hot cell outside every continuous core after zoom"});
    }
    if (tick && opt_.record_density_frames) {
        auto snap = density_.snapshot(t0);
        result_.density_frames.push_back({to_seconds(t0), snap.warming, std::move(snap.rho)});
    }

    const double dt_disc = params_.dt_disc_s;
    const double dt_cont = to_seconds(clock_.dt_cont());
    std::vector<StaticCircle> statics;
    std::vector<Vec2> positions;
    for (const auto& ev : clock_.advance()) {
        switch (ev.kind) {
            case EventKind::DiscreteStep: {
                plant_virtual_pedestrians(cont_, part_, grid_);
                const auto core = part_.core_cells(grid_);
                step_discrete(disc_, grid_, params_, dt_disc, step_rng_,
                              opt_.mode == Mode::Hybrid ? &core : nullptr);
                grid_.clear_virtual();
                positions.clear();
                for (const auto& a : disc_) positions.push_back(grid_.cell_center(a.cell));
                density_.record_step(ModelKind::Discrete, ev.frame, ev.time, clock_.dt_disc(), positions);
                check_exits_discrete(to_seconds(ev.time));
                statics = discrete_statics(disc_, part_, grid_, params_);
                break;
            }
            case EventKind::ContinuousStep: {
                if (!cont_.empty()) sfm_.step(cont_, statics, dt_cont);
                positions.clear();
                for (const auto& a : cont_) positions.push_back(a.position);
                density_.record_step(ModelKind::Continuous, ev.cont_index, ev.time, clock_.dt_cont(), positions);
                check_exits_continuous(to_seconds(ev.time));
                break;
            }
            case EventKind::TransformNow: {
                for (const auto& a : cont_) {
                    if (part_.region_of(a.position) == Region::Discrete) ++result_.metrics.detected_crossings;
                }
                merge_report(report, transform(cont_, disc_, grid_, part_, scenario_, params_, frame_,
                                               to_seconds(ev.gap)));
                now_ = ev.time;
                break;
            }
        }
    }

    auto& m = result_.metrics;
    ++m.frames;
    m.promotions += static_cast<std::int64_t>(report.promoted.size());
    m.demotions += static_cast<std::int64_t>(report.demoted.size());
    m.deferrals += static_cast<std::int64_t>(report.deferred.size());
    m.continuous_agent_seconds += static_cast<double>(cont_.size()) * dt_disc;
    m.discrete_agent_seconds += static_cast<double>(disc_.size()) * dt_disc;
    m.max_zones = std::max<std::int64_t>(m.max_zones, static_cast<std::int64_t>(part_.zones().size()));
    report.time_s = to_seconds(now_);
    record_trajectories(to_seconds(now_));
    density_.prune(now_, 2 * density_.window());
    fail(check_invariants(&report));
    result_.reports.push_back(std::move(report));
    return true;
}

RunResult Simulation::take_result() {
    result_.grid = Grid(grid_.origin(), grid_.cell_edge(), grid_.rows(), grid_.cols());
    for (std::size_t i = 0; i < grid_.size(); ++i) {
        const CellIndex c = grid_.from_linear(i);
        if (grid_.is_obstacle(c)) result_.grid.set_obstacle(c);
    }
    result_.end_time_s = to_seconds(now_);
    result_.completed = pending_.empty() && cont_.empty() && disc_.empty();
    return std::move(result_);
}

RunResult run(const Scenario& s, const SimParams& p, const RunOptions& opt) {
    const auto start = std::chrono::steady_clock::now();
    Simulation sim(s, p, opt);
    while (sim.step_frame()) {
    }
    RunResult r = sim.take_result();
    r.metrics.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return r;
}

double escape_time(const RunResult& r) {
    if (!r.completed) throw std::runtime_error("run truncated before all agents exited");
    double t = 0.0;
    for (const auto& e : r.exits) t = std::max(t, e.exit_s);
    return t;
}

}  // namespace hped
