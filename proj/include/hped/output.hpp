#pragma once
// Run artifacts on disk. Formats are described in docs/file_formats.md.

#include <filesystem>
#include <ostream>
#include <string>

#include "hped/driver.hpp"
#include "hped/scenario.hpp"

namespace hped {

void write_trajectories_csv(std::ostream& os, const RunResult& r);
void write_transform_reports(std::ostream& os, const RunResult& r);
void write_zone_events(std::ostream& os, const RunResult& r);
void write_density_frames(std::ostream& os, const RunResult& r);
std::string run_summary_json(const RunResult& r, const RunOptions& opt);

/// Writes trajectories.csv, transform_report.jsonl, zones.jsonl,
/// density_frames.txt, run_summary.json and scenario.json into dir.
/// Throws ScenarioError(Io) when the directory or a file cannot be written.
void write_run_outputs(const std::filesystem::path& dir, const Scenario& s, const SimParams& p,
                       const RunOptions& opt, const RunResult& r);

}  // namespace hped
