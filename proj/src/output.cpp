#include "hped/output.hpp"

#include <cstdio>
#include <fstream>
#include <json.hpp>

namespace hped {

namespace {

std::string fmt(double v, int digits = 6) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

using nlohmann::json;

json vec(const Vec2& v) { return json::array({v.x, v.y}); }

}  // namespace

void write_trajectories_csv(std::ostream& os, const RunResult& r) {
    os << "time_s,agent_id,x_m,y_m,model,zone_id\n";
    for (const auto& row : r.trajectories) {
        os << fmt(row.time_s, 3) << ',' << row.id << ',' << fmt(row.position.x) << ',' << fmt(row.position.y) << ','
           << row.model << ',';
        if (row.zone_id >= 0) os << row.zone_id;
        os << '\n';
    }
}

void write_transform_reports(std::ostream& os, const RunResult& r) {
    for (const auto& rep : r.reports) {
        json disp = json::array();
        for (const auto& [id, d] : rep.displacement) disp.push_back({{"agent_id", id}, {"displacement_m", d}});
        json j{{"frame", rep.frame},       {"time_s", rep.time_s},         {"promoted", rep.promoted},
               {"demoted", rep.demoted},   {"deferred", rep.deferred},     {"displacement", disp}};
        os << j.dump() << '\n';
    }
}

void write_zone_events(std::ostream& os, const RunResult& r) {
    for (const auto& e : r.zone_events) {
        json j{{"frame", e.frame}, {"time_s", e.time_s}, {"event", e.event},          {"zone_id", e.zone_id},
               {"center", vec(e.center)}, {"k", e.k},    {"population", e.population}};
        os << j.dump() << '\n';
    }
}

void write_density_frames(std::ostream& os, const RunResult& r) {
    for (const auto& f : r.density_frames) {
        os << "# t=" << fmt(f.time_s, 3) << " rows=" << r.grid.rows() << " cols=" << r.grid.cols()
           << " warming=" << (f.warming ? 1 : 0) << '\n';
        for (int m = 0; m < r.grid.rows(); ++m) {
            for (int n = 0; n < r.grid.cols(); ++n) {
                if (n) os << ' ';
                os << fmt(f.rho[r.grid.linear({m, n})], 4);
            }
            os << '\n';
        }
    }
}

std::string run_summary_json(const RunResult& r, const RunOptions& opt) {
    const auto& m = r.metrics;
    json j{{"mode", mode_name(opt.mode)},
           {"seed", opt.seed},
           {"t_end_s", opt.t_end_s},
           {"end_time_s", r.end_time_s},
           {"completed", r.completed},
           {"escape_time_s", r.completed ? json(escape_time(r)) : json(nullptr)},
           {"wall_seconds", m.wall_seconds},
           {"agent_seconds", {{"continuous", m.continuous_agent_seconds}, {"discrete", m.discrete_agent_seconds}}},
           {"frames", m.frames},
           {"spawned", m.spawned},
           {"exited", m.exited},
           {"promotions", m.promotions},
           {"demotions", m.demotions},
           {"deferrals", m.deferrals},
           {"detected_crossings", m.detected_crossings},
           {"violations", m.violations},
           {"max_zones", m.max_zones}};
    return j.dump(2) + "\n";
}

void write_run_outputs(const std::filesystem::path& dir, const Scenario& s, const SimParams& p,
                       const RunOptions& opt, const RunResult& r) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw ScenarioError(ScenarioError::Kind::Io, "cannot create output directory " + dir.string());
    auto open = [&](const char* name) {
        std::ofstream f(dir / name, std::ios::binary);
        if (!f) throw ScenarioError(ScenarioError::Kind::Io, "cannot write " + (dir / name).string());
        return f;
    };
    {
        auto f = open("trajectories.csv");
        write_trajectories_csv(f, r);
    }
    {
        auto f = open("transform_report.jsonl");
        write_transform_reports(f, r);
    }
    {
        auto f = open("zones.jsonl");
        write_zone_events(f, r);
    }
    {
        auto f = open("density_frames.txt");
        write_density_frames(f, r);
    }
    {
        auto f = open("run_summary.json");
        f << run_summary_json(r, opt);
    }
    {
        auto f = open("scenario.json");
        f << serialize_scenario(s, p);
    }
}

}  // namespace hped
