#include <doctest.h>

#include <array>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <limits>
#include <random>
#include <sstream>
#include <sys/wait.h>

#include "hped/benchmark.hpp"
#include "hped/output.hpp"
#include "hped/render.hpp"

using namespace hped;
namespace fs = std::filesystem;

namespace {

const std::string kSource = HPED_SOURCE_DIR;

struct TempDir {
    fs::path path;
    TempDir() {
        std::random_device rd;
        path = fs::temp_directory_path() / ("hped_test_" + std::to_string(rd()) + std::to_string(rd()));
        fs::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
};

int cli(const std::string& args) {
    const std::string cmd = std::string(HPED_CLI_PATH) + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

std::vector<std::string> csv_column(const fs::path& p, std::size_t col) {
    std::ifstream f(p);
    std::string line;
    std::getline(f, line);
    std::vector<std::string> out;
    while (std::getline(f, line)) {
        std::stringstream ss(line);
        std::string cell;
        for (std::size_t i = 0; i <= col; ++i) std::getline(ss, cell, ',');
        out.push_back(cell);
    }
    return out;
}

std::string corridor() { return kSource + "/scenarios/corridor.json"; }

}  // namespace

TEST_CASE("cli run writes every output file") {
    TempDir tmp;
    REQUIRE(cli("run --scenario " + corridor() + " --t-end 40 --out " + tmp.path.string()) == 0);
    for (const char* name : {"trajectories.csv", "transform_report.jsonl", "zones.jsonl", "density_frames.txt",
                             "run_summary.json", "scenario.json"}) {
        CHECK(fs::is_regular_file(tmp.path / name));
    }
    const auto summary = nlohmann::json::parse(slurp(tmp.path / "run_summary.json"));
    CHECK(summary["mode"] == "hybrid");
    CHECK(summary["violations"] == 0);
    CHECK(summary["spawned"].get<int>() == 60);
    CHECK(slurp(tmp.path / "trajectories.csv").rfind("time_s,agent_id,x_m,y_m,model,zone_id\n", 0) == 0);
    // The written scenario reloads to the same scenario.
    const auto a = load_scenario(corridor());
    const auto b = load_scenario(tmp.path / "scenario.json");
    CHECK(a.scenario == b.scenario);
    CHECK(a.params == b.params);
}

TEST_CASE("cli pure-continuous emits only continuous rows") {
    TempDir tmp;
    REQUIRE(cli("run --scenario " + corridor() + " --mode pure-continuous --t-end 30 --out " + tmp.path.string()) == 0);
    const auto models = csv_column(tmp.path / "trajectories.csv", 4);
    REQUIRE_FALSE(models.empty());
    for (const auto& m : models) CHECK(m == "C");
    CHECK(slurp(tmp.path / "zones.jsonl").empty());
}

TEST_CASE("cli runs are byte-identical for one seed") {
    TempDir a, b, c;
    const std::string base = "run --scenario " + corridor() + " --t-end 40 --seed 7 --out ";
    REQUIRE(cli(base + a.path.string()) == 0);
    REQUIRE(cli(base + b.path.string()) == 0);
    REQUIRE(cli("run --scenario " + corridor() + " --t-end 40 --seed 8 --out " + c.path.string()) == 0);
    CHECK(slurp(a.path / "trajectories.csv") == slurp(b.path / "trajectories.csv"));
    CHECK(slurp(a.path / "transform_report.jsonl") == slurp(b.path / "transform_report.jsonl"));
    CHECK(slurp(a.path / "zones.jsonl") == slurp(b.path / "zones.jsonl"));
    CHECK(slurp(a.path / "trajectories.csv") != slurp(c.path / "trajectories.csv"));
}

TEST_CASE("cli overrides and exit codes") {
    TempDir tmp;
    const std::string out = " --out " + tmp.path.string();
    CHECK(cli("run --scenario " + corridor() + " --t-end 5 --set dt_disc_s=1.2 --set k_stock=3" + out) == 0);
    const auto p = load_scenario(tmp.path / "scenario.json").params;
    CHECK(p.dt_disc_s == 1.2);
    CHECK(p.k_stock == 3.0);
    CHECK(cli("run --scenario " + corridor() + " --t-end 5 --rho-thr 2.5 --zoom-interval 1.0" + out) == 0);
    CHECK(load_scenario(tmp.path / "scenario.json").params.rho_thr_ped_m2 == 2.5);

    CHECK(cli("run --scenario " + corridor() + " --set k_stock=0.5" + out) == 1);
    CHECK(cli("run --scenario " + corridor() + " --set no_such_key=1" + out) == 1);
    CHECK(cli("run --scenario " + corridor() + " --set dt_disc_s" + out) == 1);
    CHECK(cli("run --scenario " + corridor() + " --mode macro" + out) == 1);
    CHECK(cli("run" + out) == 1);
    CHECK(cli("run --scenario " + (tmp.path / "missing.json").string() + out) == 3);
    std::ofstream(tmp.path / "broken.json") << "{ not json";
    CHECK(cli("run --scenario " + (tmp.path / "broken.json").string() + out) == 1);
    std::ofstream(tmp.path / "blocker") << "x";
    CHECK(cli("run --scenario " + corridor() + " --t-end 2 --out " + (tmp.path / "blocker").string()) == 3);
    CHECK(cli("render --run " + (tmp.path / "nowhere").string()) == 3);
}

TEST_CASE("benchmark modes") {
    SimParams p;
    RunOptions opt;
    apply_benchmark_mode("hybrid-series-2", p, opt);
    CHECK(opt.mode == Mode::Hybrid);
    CHECK(p.rho_thr_ped_m2 == 1.5);
    CHECK(p.zoom_radius_m == 3.0);
    CHECK(p.zoom_interval_s == 2.5);
    CHECK_NOTHROW(validate(p));
    SimParams q;
    apply_benchmark_mode("hybrid-series-3", q, opt);
    CHECK(q.rho_thr_ped_m2 == 4.0);
    CHECK(q.zoom_radius_m == 2.0);
    CHECK(q.zoom_interval_s == 2.5);
    CHECK_NOTHROW(validate(q));
    apply_benchmark_mode("pure-continuous", q, opt);
    CHECK(opt.mode == Mode::PureContinuous);
    CHECK_THROWS_AS(apply_benchmark_mode("series-9", q, opt), std::invalid_argument);
}

TEST_CASE("with_agent_count splits the schedule proportionally") {
    Scenario s = load_scenario(corridor()).scenario;
    s.spawn_schedule = {{"west", 1.0, 30, 0.0}, {"west", 1.0, 10, 5.0}};
    const auto t = with_agent_count(s, 100);
    CHECK(t.spawn_schedule[0].count == 75);
    CHECK(t.spawn_schedule[1].count == 25);
    CHECK(with_agent_count(s, 0).spawn_schedule[0].count == 0);
    CHECK(with_agent_count(s, 0).spawn_schedule[1].count == 0);
    const auto odd = with_agent_count(s, 7);
    CHECK(odd.spawn_schedule[0].count + odd.spawn_schedule[1].count == 7);
}

TEST_CASE("median") {
    CHECK(median({3.0, 1.0, 2.0}) == 2.0);
    CHECK(median({4.0, 1.0, 2.0, 3.0}) == 2.5);
    CHECK(std::isnan(median({})));
}

TEST_CASE("benchmark with no agents is near-instant in every mode") {
    const auto l = load_scenario(corridor());
    BenchmarkConfig cfg;
    cfg.agent_counts = {0};
    cfg.repetitions = 2;
    cfg.warmup = false;
    const auto rows = run_benchmark(l.scenario, l.params, cfg);
    REQUIRE(rows.size() == 6);
    for (const auto& r : rows) {
        CHECK(r.error.empty());
        CHECK(r.n_agents == 0);
        CHECK(r.wall_seconds < 0.05);
        CHECK(r.escape_time_s == 0.0);
    }
    // Interleaved order: all modes of rep 0 before rep 1.
    CHECK(rows[0].rep == 0);
    CHECK(rows[2].rep == 0);
    CHECK(rows[3].rep == 1);
    CHECK(rows[0].mode == rows[3].mode);
}

TEST_CASE("benchmark csv") {
    std::vector<BenchmarkRow> rows{{"hybrid-series-3", 600, 1, 0.25, 312.5, {}},
                                   {"pure-continuous", 600, 1, 1.5, std::numeric_limits<double>::quiet_NaN(), {}}};
    std::ostringstream os;
    write_benchmark_csv(os, rows);
    CHECK(os.str() ==
          "mode,n_agents,rep,wall_seconds,escape_time_s\n"
          "hybrid-series-3,600,1,0.250000,312.500\n"
          "pure-continuous,600,1,1.500000,\n");
}

TEST_CASE("png round trip") {
    TempDir tmp;
    Image img(7, 5, 1, 2, 3);
    img.set(6, 4, 250, 128, 0);
    img.set(0, 0, 9, 9, 9);
    write_png(tmp.path / "a.png", img);
    const Image back = read_png(tmp.path / "a.png");
    CHECK(back.width == 7);
    CHECK(back.height == 5);
    CHECK(back.rgb == img.rgb);
    CHECK_THROWS_AS(read_png(tmp.path / "none.png"), ScenarioError);
}

TEST_CASE("render: empty run gives background-only frames") {
    TempDir tmp;
    const auto l = load_scenario(kSource + "/scenarios/gap.json");
    RunResult r;
    RunOptions opt;
    write_run_outputs(tmp.path, l.scenario, l.params, opt, r);
    RenderOptions ro;
    ro.pixels_per_m = 10.0;
    REQUIRE(render_run(tmp.path, tmp.path / "img", ro) == 1);
    const Image img = read_png(tmp.path / "img" / "frame_00000.png");
    CHECK(img.width == 100);
    int gray = 0;
    for (int y = 0; y < img.height; ++y) {
        for (int x = 0; x < img.width; ++x) {
            const auto* px = img.at(x, y);
            const bool white = px[0] == 255 && px[1] == 255 && px[2] == 255;
            const bool obstacle = px[0] == 90 && px[1] == 90 && px[2] == 90;
            REQUIRE((white || obstacle));
            gray += obstacle;
        }
    }
    CHECK(gray > 0);
}

TEST_CASE("render: zone disk and annulus use distinct fills") {
    TempDir tmp;
    const auto l = load_scenario(corridor());
    Scenario s = l.scenario;
    s.bounds = Polygon({{0, 0}, {20, 0}, {20, 12}, {0, 12}});
    s.origins[0].polygon = Polygon({{0.3, 0.3}, {2.5, 0.3}, {2.5, 2.9}, {0.3, 2.9}});
    s.destinations[0].polygon = Polygon({{18.5, 0}, {20, 0}, {20, 12}, {18.5, 12}});
    RunResult r;
    r.zone_events.push_back({0, 0.0, "created", 1, {10.0, 6.0}, 1, 0});
    r.trajectories.push_back({1.0, 0, {4.0, 6.0}, 'D', -1});
    r.trajectories.push_back({1.0, 1, {10.0, 6.0}, 'C', 1});
    r.trajectories.push_back({2.0, 1, {10.5, 6.0}, 'C', 1});
    RunOptions opt;
    write_run_outputs(tmp.path, s, l.params, opt, r);
    RenderOptions ro;
    ro.pixels_per_m = 10.0;
    ro.stride = 2;
    REQUIRE(render_run(tmp.path, tmp.path / "img", ro) == 1);
    const Image img = read_png(tmp.path / "img" / "frame_00000.png");
    auto at = [&](double x, double y) {
        const auto* px = img.at(static_cast<int>(x * 10), img.height - 1 - static_cast<int>(y * 10));
        return std::array<int, 3>{px[0], px[1], px[2]};
    };
    const double R = l.params.zoom_radius_m;
    const double w = l.params.transit_width();
    const auto disk = at(10.0 + R / 2, 6.0);
    const auto ring = at(10.0 + R + w / 2, 6.0);
    const auto outside = at(10.0 + R + w + 0.5, 6.0);
    CHECK(disk != ring);
    CHECK(disk != outside);
    CHECK(ring != outside);
    CHECK(outside == std::array<int, 3>{255, 255, 255});
    CHECK(at(4.0, 6.0) != at(10.0, 6.0));  // agents colored by model
}
