#include "hped/scenario.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace hped {

using nlohmann::json;

namespace {

struct ParamField {
    const char* key;
    double SimParams::*d;
    int SimParams::*i;
};

constexpr ParamField kFields[] = {
    {"dt_cont_s", &SimParams::dt_cont_s, nullptr},
    {"dt_disc_s", &SimParams::dt_disc_s, nullptr},
    {"v_max_mps", &SimParams::v_max_mps, nullptr},
    {"v_desired_mean_mps", &SimParams::v_desired_mean_mps, nullptr},
    {"v_desired_sd_mps", &SimParams::v_desired_sd_mps, nullptr},
    {"torso_radius_m", &SimParams::torso_radius_m, nullptr},
    {"cell_edge_m", &SimParams::cell_edge_m, nullptr},
    {"rho_thr_ped_m2", &SimParams::rho_thr_ped_m2, nullptr},
    {"zoom_radius_m", &SimParams::zoom_radius_m, nullptr},
    {"k_max", nullptr, &SimParams::k_max},
    {"density_window_s", &SimParams::density_window_s, nullptr},
    {"zoom_interval_s", &SimParams::zoom_interval_s, nullptr},
    {"relaxation_time_s", &SimParams::relaxation_time_s, nullptr},
    {"sf_A_mps2", &SimParams::sf_A_mps2, nullptr},
    {"sf_B_m", &SimParams::sf_B_m, nullptr},
    {"sf_kappa_kg_s2", &SimParams::sf_kappa_kg_s2, nullptr},
    {"sf_k_kg_m_s", &SimParams::sf_k_kg_m_s, nullptr},
    {"mass_kg", &SimParams::mass_kg, nullptr},
    {"k_stock", &SimParams::k_stock, nullptr},
    {"transit_width_m", &SimParams::transit_width_m, nullptr},
    {"route_inflation_m", &SimParams::route_inflation_m, nullptr},
    {"force_cutoff_m", &SimParams::force_cutoff_m, nullptr},
};

[[noreturn]] void fail_validation(const std::string& invariant, const std::string& detail) {
    throw ScenarioError(ScenarioError::Kind::Validation, "validation error: " + invariant + " (" + detail + ")");
}

std::string num(double v) {
    std::ostringstream os;
    os.precision(10);
    os << v;
    return os.str();
}

bool whole_microseconds(double s) {
    const double us = s * 1e6;
    return std::abs(us - std::round(us)) < 1e-6;
}

bool polygons_overlap(const Polygon& a, const Polygon& b) {
    const std::size_t n = a.size(), m = b.size();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < m; ++j) {
            if (segments_properly_intersect(a[i], a[(i + 1) % n], b[j], b[(j + 1) % m])) return true;
        }
    }
    auto strictly_in = [](const Vec2& p, const Polygon& poly) {
        return point_in_polygon(p, poly) && point_polygon_boundary_distance(p, poly) > kEps;
    };
    for (const auto& v : a.vertices) if (strictly_in(v, b)) return true;
    for (const auto& v : b.vertices) if (strictly_in(v, a)) return true;
    return strictly_in(a.centroid(), b) || strictly_in(b.centroid(), a);
}

Polygon parse_polygon(const json& j, const std::string& what) {
    if (!j.is_array()) throw ScenarioError(ScenarioError::Kind::Parse, what + ": polygon must be an array of [x, y]");
    std::vector<Vec2> v;
    for (const auto& p : j) {
        if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number()) {
            throw ScenarioError(ScenarioError::Kind::Parse, what + ": vertex must be [x, y]");
        }
        v.emplace_back(p[0].get<double>(), p[1].get<double>());
    }
    return Polygon(std::move(v));
}

json polygon_json(const Polygon& p) {
    json arr = json::array();
    for (const auto& v : p.vertices) arr.push_back({v.x, v.y});
    return arr;
}

void check_polygon(const Polygon& p, const std::string& what) {
    if (p.size() < 3) fail_validation("polygon has >= 3 vertices", what);
    for (const auto& v : p.vertices) {
        if (!v.finite()) fail_validation("finite coordinates", what);
    }
    if (p.area() <= kEps) fail_validation("polygon has positive area", what);
}

}  // namespace

std::int64_t SimParams::dt_cont_us() const { return std::llround(dt_cont_s * 1e6); }
std::int64_t SimParams::dt_disc_us() const { return std::llround(dt_disc_s * 1e6); }

int Scenario::origin_index(const std::string& name) const {
    for (std::size_t i = 0; i < origins.size(); ++i) if (origins[i].name == name) return static_cast<int>(i);
    return -1;
}

int Scenario::destination_index(const std::string& name) const {
    for (std::size_t i = 0; i < destinations.size(); ++i) if (destinations[i].name == name) return static_cast<int>(i);
    return -1;
}

void validate(const SimParams& p) {
    for (const auto& f : kFields) {
        if (f.d && !std::isfinite(p.*(f.d))) fail_validation(std::string(f.key) + " is finite", "nan/inf");
    }
    if (p.dt_cont_s <= 0.0 || p.dt_disc_s <= 0.0) fail_validation("time steps > 0", num(p.dt_cont_s) + ", " + num(p.dt_disc_s));
    if (!whole_microseconds(p.dt_cont_s) || !whole_microseconds(p.dt_disc_s)) {
        fail_validation("time steps are whole microseconds", num(p.dt_cont_s) + ", " + num(p.dt_disc_s));
    }
    if (p.dt_cont_s > p.dt_disc_s) fail_validation("dt_cont ≤ dt_disc", num(p.dt_cont_s) + " > " + num(p.dt_disc_s));
    if (p.dt_cont_s < 0.01 - 1e-12) fail_validation("dt_cont ≥ 0.01 s", num(p.dt_cont_s));
    if (p.v_max_mps <= 0.0) fail_validation("v_max > 0", num(p.v_max_mps));
    if (p.torso_radius_m <= 0.0) fail_validation("torso_radius > 0", num(p.torso_radius_m));
    if (p.cell_edge_m < 2.0 * p.torso_radius_m - 1e-12) {
        fail_validation("cell_edge ≥ 2·torso_radius", num(p.cell_edge_m) + " < " + num(2.0 * p.torso_radius_m));
    }
    if (p.zoom_radius_m <= 0.0) fail_validation("R > 0", num(p.zoom_radius_m));
    if (p.zoom_radius_m > p.v_max_mps * p.dt_disc_s + 1e-9) {
        fail_validation("R ≤ v_max·dt_disc", num(p.zoom_radius_m) + " > " + num(p.v_max_mps * p.dt_disc_s));
    }
    if (p.rho_thr_ped_m2 <= 0.0) fail_validation("rho_thr > 0", num(p.rho_thr_ped_m2));
    if (p.k_max < 1) fail_validation("k_max ≥ 1", std::to_string(p.k_max));
    if (p.density_window_s < p.dt_disc_s - 1e-12 || !whole_microseconds(p.density_window_s)) {
        fail_validation("density_window ≥ dt_disc (whole microseconds)", num(p.density_window_s));
    }
    if (p.zoom_interval_s < 0.0 || !whole_microseconds(p.zoom_interval_s)) {
        fail_validation("zoom_interval ≥ 0 (whole microseconds)", num(p.zoom_interval_s));
    }
    if (p.relaxation_time_s <= 0.0) fail_validation("relaxation_time > 0", num(p.relaxation_time_s));
    if (p.mass_kg <= 0.0) fail_validation("mass > 0", num(p.mass_kg));
    if (p.sf_B_m <= 0.0) fail_validation("sf_B > 0", num(p.sf_B_m));
    if (p.k_stock <= 1.0) fail_validation("k_stock > 1", num(p.k_stock));
    if (p.v_desired_mean_mps <= 0.0 || p.v_desired_mean_mps > p.v_max_mps) {
        fail_validation("0 < v_desired_mean ≤ v_max", num(p.v_desired_mean_mps));
    }
    if (p.v_desired_sd_mps < 0.0) fail_validation("v_desired_sd ≥ 0", num(p.v_desired_sd_mps));
    if (p.transit_width() <= p.v_max_mps * p.dt_disc_s) {
        fail_validation("w_Tr > v_max·dt_disc", num(p.transit_width()));
    }
    if (p.route_inflation_m < p.torso_radius_m - 1e-12) {
        fail_validation("route_inflation ≥ torso_radius", num(p.route_inflation_m));
    }
    if (p.force_cutoff_m <= 2.0 * p.torso_radius_m) fail_validation("force_cutoff > 2·torso_radius", num(p.force_cutoff_m));
}

void validate(const Scenario& s) {
    check_polygon(s.bounds, "bounds");
    for (std::size_t i = 0; i < s.obstacles.size(); ++i) {
        const auto& o = s.obstacles[i];
        check_polygon(o, "obstacle " + std::to_string(i));
        for (const auto& v : o.vertices) {
            if (!point_in_polygon(v, s.bounds)) fail_validation("obstacles lie within bounds", "obstacle " + std::to_string(i));
        }
    }
    auto check_region = [&](const NamedRegion& r, const char* kind) {
        check_polygon(r.polygon, std::string(kind) + " " + r.name);
        for (const auto& o : s.obstacles) {
            if (polygons_overlap(r.polygon, o)) {
                fail_validation("origins/destinations do not intersect obstacles", std::string(kind) + " " + r.name);
            }
        }
    };
    for (const auto& o : s.origins) check_region(o, "origin");
    for (const auto& d : s.destinations) check_region(d, "destination");
    if (s.od_matrix.size() != s.origins.size()) {
        fail_validation("od_matrix has one row per origin", std::to_string(s.od_matrix.size()) + " rows");
    }
    for (std::size_t i = 0; i < s.od_matrix.size(); ++i) {
        const auto& row = s.od_matrix[i];
        if (row.size() != s.destinations.size()) {
            fail_validation("od_matrix has one column per destination", "row " + std::to_string(i));
        }
        double sum = 0.0;
        for (double v : row) {
            if (!(v >= 0.0)) fail_validation("od_matrix entries ≥ 0", "row " + std::to_string(i));
            sum += v;
        }
        if (std::abs(sum - 1.0) > 1e-9) fail_validation("OD row sums to 1", "row " + std::to_string(i) + " sums to " + num(sum));
    }
    for (const auto& e : s.spawn_schedule) {
        if (s.origin_index(e.origin) < 0) fail_validation("spawn origin exists", e.origin);
        if (e.count < 0 || e.rate_per_s < 0.0 || e.start_s < 0.0) fail_validation("spawn entry non-negative", e.origin);
    }
    for (const auto& z : s.static_zones) {
        if (z.k < 1) fail_validation("static zone k ≥ 1", std::to_string(z.k));
    }
}

void set_param(SimParams& p, const std::string& key, double value) {
    for (const auto& f : kFields) {
        if (key == f.key) {
            if (f.d) {
                p.*(f.d) = value;
            } else {
                p.*(f.i) = static_cast<int>(std::lround(value));
            }
            return;
        }
    }
    throw ScenarioError(ScenarioError::Kind::Parse, "unknown parameter: " + key);
}

std::vector<std::string> param_keys() {
    std::vector<std::string> keys;
    for (const auto& f : kFields) keys.emplace_back(f.key);
    return keys;
}

LoadedScenario parse_scenario(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ScenarioError(ScenarioError::Kind::Parse, std::string("parse error: ") + e.what());
    }
    LoadedScenario out;
    try {
        if (!j.is_object()) throw ScenarioError(ScenarioError::Kind::Parse, "parse error: top level must be an object");
        if (!j.contains("bounds")) throw ScenarioError(ScenarioError::Kind::Parse, "parse error: missing 'bounds'");
        Scenario& s = out.scenario;
        s.bounds = parse_polygon(j.at("bounds"), "bounds");
        for (const auto& o : j.value("obstacles", json::array())) s.obstacles.push_back(parse_polygon(o, "obstacle"));
        for (const auto& o : j.value("origins", json::array())) {
            s.origins.push_back({o.at("name").get<std::string>(), parse_polygon(o.at("polygon"), "origin")});
        }
        for (const auto& d : j.value("destinations", json::array())) {
            s.destinations.push_back({d.at("name").get<std::string>(), parse_polygon(d.at("polygon"), "destination")});
        }
        if (j.contains("od_matrix")) {
            s.od_matrix = j.at("od_matrix").get<std::vector<std::vector<double>>>();
        } else if (s.destinations.size() == 1) {
            s.od_matrix.assign(s.origins.size(), std::vector<double>{1.0});
        }
        for (const auto& e : j.value("spawn_schedule", json::array())) {
            SpawnEntry se;
            se.origin = e.at("origin").get<std::string>();
            se.rate_per_s = e.value("rate_per_s", 0.0);
            se.count = e.at("count").get<int>();
            se.start_s = e.value("start_s", 0.0);
            s.spawn_schedule.push_back(se);
        }
        for (const auto& z : j.value("static_zones", json::array())) {
            const auto c = z.at("center");
            s.static_zones.push_back({{c.at(0).get<double>(), c.at(1).get<double>()}, z.value("k", 1)});
        }
        if (j.contains("params")) {
            for (const auto& [key, value] : j.at("params").items()) {
                if (!value.is_number()) throw ScenarioError(ScenarioError::Kind::Parse, "parse error: parameter " + key + " must be a number");
                set_param(out.params, key, value.get<double>());
            }
        }
    } catch (const json::exception& e) {
        throw ScenarioError(ScenarioError::Kind::Parse, std::string("parse error: ") + e.what());
    }
    validate(out.params);
    validate(out.scenario);
    return out;
}

LoadedScenario load_scenario(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ScenarioError(ScenarioError::Kind::Io, "cannot open scenario file: " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_scenario(ss.str());
}

std::string serialize_scenario(const Scenario& s, const SimParams& p) {
    json j;
    j["bounds"] = polygon_json(s.bounds);
    j["obstacles"] = json::array();
    for (const auto& o : s.obstacles) j["obstacles"].push_back(polygon_json(o));
    j["origins"] = json::array();
    for (const auto& o : s.origins) j["origins"].push_back({{"name", o.name}, {"polygon", polygon_json(o.polygon)}});
    j["destinations"] = json::array();
    for (const auto& d : s.destinations) j["destinations"].push_back({{"name", d.name}, {"polygon", polygon_json(d.polygon)}});
    j["od_matrix"] = s.od_matrix;
    j["spawn_schedule"] = json::array();
    for (const auto& e : s.spawn_schedule) {
        j["spawn_schedule"].push_back({{"origin", e.origin}, {"rate_per_s", e.rate_per_s}, {"count", e.count}, {"start_s", e.start_s}});
    }
    j["static_zones"] = json::array();
    for (const auto& z : s.static_zones) j["static_zones"].push_back({{"center", {z.center.x, z.center.y}}, {"k", z.k}});
    json params;
    for (const auto& f : kFields) {
        if (f.d) params[f.key] = p.*(f.d);
        else params[f.key] = p.*(f.i);
    }
    j["params"] = params;
    return j.dump(2);
}

double max_discrete_density(CellShape shape, double edge_m) {
    const double a2 = edge_m * edge_m;
    switch (shape) {
        case CellShape::Triangular: return 4.0 * std::sqrt(3.0) / (3.0 * a2);
        case CellShape::Quadratic: return 1.0 / a2;
        case CellShape::Hexagonal: return 2.0 * std::sqrt(3.0) / (9.0 * a2);
    }
    return 0.0;
}

}  // namespace hped
