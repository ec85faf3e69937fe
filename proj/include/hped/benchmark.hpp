#pragma once
// Wall-clock comparison of pure-continuous and hybrid runs over agent counts.

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "hped/driver.hpp"
#include "hped/scenario.hpp"

namespace hped {

/// Modes understood by the harness: pure-continuous, pure-discrete,
/// hybrid (parameters as given), hybrid-series-2 and hybrid-series-3.
std::vector<std::string> benchmark_modes();

/// Applies a benchmark mode to the base parameters. Throws
/// std::invalid_argument for an unknown mode.
void apply_benchmark_mode(const std::string& mode, SimParams& p, RunOptions& opt);

/// Copy of the scenario whose spawn schedule releases n agents, split over
/// the schedule entries in proportion to their counts.
Scenario with_agent_count(const Scenario& s, int n);

struct BenchmarkConfig {
    std::vector<int> agent_counts{0, 100};
    std::vector<std::string> modes{"pure-continuous", "hybrid-series-2", "hybrid-series-3"};
    int repetitions{3};
    bool warmup{true};
    bool parallel{false};
    double t_end_s{900.0};
    std::uint64_t seed{1};
};

struct BenchmarkRow {
    std::string mode;
    int n_agents{0};
    int rep{0};
    double wall_seconds{0.0};
    double escape_time_s{0.0};  ///< NaN when the run did not finish
    std::string error;
};

std::vector<BenchmarkRow> run_benchmark(const Scenario& s, const SimParams& base, const BenchmarkConfig& cfg);
void write_benchmark_csv(std::ostream& os, const std::vector<BenchmarkRow>& rows);

double median(std::vector<double> values);

}  // namespace hped
