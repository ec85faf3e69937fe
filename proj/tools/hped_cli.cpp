#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "hped/benchmark.hpp"
#include "hped/driver.hpp"
#include "hped/invariant.hpp"
#include "hped/output.hpp"
#include "hped/render.hpp"
#include "hped/routing.hpp"
#include "hped/scenario.hpp"

namespace {

enum ExitCode { kOk = 0, kValidation = 1, kInvariant = 2, kIo = 3 };

void apply_overrides(hped::SimParams& p, const std::vector<std::string>& sets) {
    for (const auto& kv : sets) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) {
            throw hped::ScenarioError(hped::ScenarioError::Kind::Validation, "validation error: expected key=value, got " + kv);
        }
        double value = 0.0;
        try {
            value = std::stod(kv.substr(eq + 1));
        } catch (const std::exception&) {
            throw hped::ScenarioError(hped::ScenarioError::Kind::Validation, "validation error: not a number: " + kv);
        }
        hped::set_param(p, kv.substr(0, eq), value);
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Hybrid continuous/discrete pedestrian simulator"};
    app.require_subcommand(1);

    std::string scenario_path;
    std::string out_dir = "out";
    std::uint64_t seed = 1;
    double t_end = 600.0;
    std::string mode = "hybrid";
    std::vector<std::string> sets;
    double rho_thr = -1.0, zoom_radius = -1.0, zoom_interval = -1.0;

    auto* run_cmd = app.add_subcommand("run", "Simulate one scenario and write the run outputs");
    run_cmd->add_option("--scenario", scenario_path, "Scenario JSON file")->required();
    run_cmd->add_option("--seed", seed, "RNG seed");
    run_cmd->add_option("--t-end", t_end, "Simulated time limit in seconds");
    run_cmd->add_option("--mode", mode, "hybrid | pure-continuous | pure-discrete")
        ->check(CLI::IsMember({"hybrid", "pure-continuous", "pure-discrete"}));
    run_cmd->add_option("--rho-thr", rho_thr, "Zoom density threshold (ped/m^2)");
    run_cmd->add_option("--zoom-radius", zoom_radius, "Zoom unit radius R (m)");
    run_cmd->add_option("--zoom-interval", zoom_interval, "Zoom check interval (s)");
    run_cmd->add_option("--out", out_dir, "Output directory");
    run_cmd->add_option("--set", sets, "Parameter override key=value (repeatable)");

    hped::BenchmarkConfig bench;
    std::string bench_out;
    std::string bench_scenario;
    std::vector<std::string> bench_sets;
    bool no_warmup = false;
    auto* bench_cmd = app.add_subcommand("benchmark", "Time pure and hybrid runs over agent counts");
    bench_cmd->add_option("--scenario", bench_scenario, "Scenario JSON file")->required();
    bench_cmd->add_option("--counts", bench.agent_counts, "Agent counts")->delimiter(',');
    bench_cmd->add_option("--modes", bench.modes, "Modes")->delimiter(',');
    bench_cmd->add_option("--reps", bench.repetitions, "Repetitions per cell");
    bench_cmd->add_option("--seed", bench.seed, "Base seed");
    bench_cmd->add_option("--t-end", bench.t_end_s, "Simulated time limit per run");
    bench_cmd->add_flag("--no-warmup", no_warmup, "Skip the discarded warm-up run");
    bench_cmd->add_flag("--parallel", bench.parallel, "Run cells concurrently");
    bench_cmd->add_option("--out", bench_out, "CSV file (default: stdout)");
    bench_cmd->add_option("--set", bench_sets, "Parameter override key=value (repeatable)");

    std::string run_dir;
    std::string render_out;
    hped::RenderOptions ropt;
    bool no_heat = false;
    auto* render_cmd = app.add_subcommand("render", "Draw PNG frames from a run directory");
    render_cmd->add_option("--run", run_dir, "Directory written by `run`")->required();
    render_cmd->add_option("--out", render_out, "Image directory (default: <run>/render)");
    render_cmd->add_option("--stride", ropt.stride, "Render every n-th sample time");
    render_cmd->add_option("--scale", ropt.pixels_per_m, "Pixels per meter");
    render_cmd->add_flag("--no-heatmaps", no_heat, "Skip density heatmaps");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kValidation;
    }

    try {
        if (*run_cmd) {
            auto loaded = hped::load_scenario(scenario_path);
            hped::SimParams p = loaded.params;
            if (rho_thr >= 0) p.rho_thr_ped_m2 = rho_thr;
            if (zoom_radius >= 0) p.zoom_radius_m = zoom_radius;
            if (zoom_interval >= 0) p.zoom_interval_s = zoom_interval;
            apply_overrides(p, sets);
            hped::validate(p);
            hped::RunOptions opt;
            opt.mode = hped::parse_mode(mode);
            opt.seed = seed;
            opt.t_end_s = t_end;
            opt.record_density_frames = true;
            const auto result = hped::run(loaded.scenario, p, opt);
            hped::write_run_outputs(out_dir, loaded.scenario, p, opt, result);
            std::cout << hped::run_summary_json(result, opt);
        } else if (*bench_cmd) {
            auto loaded = hped::load_scenario(bench_scenario);
            apply_overrides(loaded.params, bench_sets);
            hped::validate(loaded.params);
            bench.warmup = !no_warmup;
            const auto rows = hped::run_benchmark(loaded.scenario, loaded.params, bench);
            if (bench_out.empty()) {
                hped::write_benchmark_csv(std::cout, rows);
            } else {
                std::ofstream f(bench_out);
                if (!f) throw hped::ScenarioError(hped::ScenarioError::Kind::Io, "cannot write " + bench_out);
                hped::write_benchmark_csv(f, rows);
            }
            for (const auto& r : rows) {
                if (!r.error.empty()) std::cerr << r.mode << " n=" << r.n_agents << " rep=" << r.rep << ": " << r.error << '\n';
            }
        } else if (*render_cmd) {
            ropt.heatmaps = !no_heat;
            const std::string dst = render_out.empty() ? run_dir + "/render" : render_out;
            const int n = hped::render_run(run_dir, dst, ropt);
            std::cout << n << " frames written to " << dst << '\n';
        }
    } catch (const hped::ScenarioError& e) {
        std::cerr << e.what() << '\n';
        return e.kind() == hped::ScenarioError::Kind::Io ? kIo : kValidation;
    } catch (const hped::RoutingError& e) {
        std::cerr << "validation error: " << e.what() << '\n';
        return kValidation;
    } catch (const hped::InvariantViolation& e) {
        std::cerr << "invariant violation: " << e.what() << '\n';
        return kInvariant;
    } catch (const std::filesystem::filesystem_error& e) {
        std::cerr << e.what() << '\n';
        return kIo;
    }
    return kOk;
}
