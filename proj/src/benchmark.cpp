#include "hped/benchmark.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <future>
#include <limits>
#include <stdexcept>

namespace hped {

namespace {

// XT window for the benchmark series. Long enough that one or two discrete
// samples of a walking agent (1.4 s each) stay below 1.5 ped/m^2 on 0.46 m
// cells; with a 2 s window every discrete walker reads as a hotspot.
constexpr double kSeriesDensityWindow = 10.0;

}  // namespace

std::vector<std::string> benchmark_modes() {
    return {"pure-continuous", "pure-discrete", "hybrid", "hybrid-series-2", "hybrid-series-3"};
}

void apply_benchmark_mode(const std::string& mode, SimParams& p, RunOptions& opt) {
    if (mode == "pure-continuous") {
        opt.mode = Mode::PureContinuous;
    } else if (mode == "pure-discrete") {
        opt.mode = Mode::PureDiscrete;
    } else if (mode == "hybrid") {
        opt.mode = Mode::Hybrid;
    } else if (mode == "hybrid-series-2") {
        opt.mode = Mode::Hybrid;
        p.rho_thr_ped_m2 = 1.5;
        p.zoom_radius_m = 3.0;
        p.dt_disc_s = 1.4;
        p.zoom_interval_s = 2.5;
        p.density_window_s = kSeriesDensityWindow;
    } else if (mode == "hybrid-series-3") {
        opt.mode = Mode::Hybrid;
        p.rho_thr_ped_m2 = 4.0;
        p.zoom_radius_m = 2.0;
        p.dt_disc_s = 1.0;
        p.zoom_interval_s = 2.5;
        p.density_window_s = kSeriesDensityWindow;
    } else {
        throw std::invalid_argument("unknown benchmark mode: " + mode);
    }
}

Scenario with_agent_count(const Scenario& s, int n) {
    Scenario out = s;
    if (out.spawn_schedule.empty()) return out;
    long total = 0;
    for (const auto& e : out.spawn_schedule) total += e.count;
    int assigned = 0;
    for (std::size_t i = 0; i < out.spawn_schedule.size(); ++i) {
        auto& e = out.spawn_schedule[i];
        if (i + 1 == out.spawn_schedule.size()) {
            e.count = n - assigned;
        } else {
            e.count = total > 0 ? static_cast<int>(std::lround(static_cast<double>(n) * e.count / total))
                                : n / static_cast<int>(out.spawn_schedule.size());
            assigned += e.count;
        }
    }
    return out;
}

double median(std::vector<double> values) {
    if (values.empty()) return std::numeric_limits<double>::quiet_NaN();
    std::sort(values.begin(), values.end());
    const std::size_t m = values.size() / 2;
    return values.size() % 2 ? values[m] : 0.5 * (values[m - 1] + values[m]);
}

namespace {

BenchmarkRow run_cell(const Scenario& s, const SimParams& base, const std::string& mode, int n, int rep,
                      const BenchmarkConfig& cfg) {
    BenchmarkRow row{mode, n, rep, 0.0, std::numeric_limits<double>::quiet_NaN(), {}};
    try {
        SimParams p = base;
        RunOptions opt;
        opt.seed = cfg.seed + static_cast<std::uint64_t>(rep);
        opt.t_end_s = cfg.t_end_s;
        opt.record_trajectories = false;
        apply_benchmark_mode(mode, p, opt);
        const RunResult r = run(with_agent_count(s, n), p, opt);
        row.wall_seconds = r.metrics.wall_seconds;
        if (r.completed) row.escape_time_s = escape_time(r);
    } catch (const std::exception& e) {
        row.error = e.what();
    }
    return row;
}

}  // namespace

std::vector<BenchmarkRow> run_benchmark(const Scenario& s, const SimParams& base, const BenchmarkConfig& cfg) {
    std::vector<BenchmarkRow> rows;
    struct Cell {
        std::string mode;
        int n;
        int rep;
    };
    std::vector<Cell> cells;
    // Modes interleaved within each repetition so drift in machine load hits
    // all of them alike.
    for (int n : cfg.agent_counts) {
        for (int rep = 0; rep < cfg.repetitions; ++rep) {
            for (const auto& mode : cfg.modes) cells.push_back({mode, n, rep});
        }
    }
    if (cfg.warmup && !cells.empty()) {
        const int n = *std::max_element(cfg.agent_counts.begin(), cfg.agent_counts.end());
        run_cell(s, base, cfg.modes.front(), std::min(n, 50), 0, cfg);
    }
    if (cfg.parallel) {
        std::vector<std::future<BenchmarkRow>> jobs;
        for (const auto& c : cells) {
            jobs.push_back(std::async(std::launch::async, [&, c] { return run_cell(s, base, c.mode, c.n, c.rep, cfg); }));
        }
        for (auto& j : jobs) rows.push_back(j.get());
    } else {
        for (const auto& c : cells) rows.push_back(run_cell(s, base, c.mode, c.n, c.rep, cfg));
    }
    return rows;
}

void write_benchmark_csv(std::ostream& os, const std::vector<BenchmarkRow>& rows) {
    os << "mode,n_agents,rep,wall_seconds,escape_time_s\n";
    char buf[64];
    for (const auto& r : rows) {
        os << r.mode << ',' << r.n_agents << ',' << r.rep << ',';
        std::snprintf(buf, sizeof buf, "%.6f", r.wall_seconds);
        os << buf << ',';
        if (!std::isnan(r.escape_time_s)) {
            std::snprintf(buf, sizeof buf, "%.3f", r.escape_time_s);
            os << buf;
        }
        os << '\n';
    }
}

}  // namespace hped
