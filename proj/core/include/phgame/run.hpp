#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "phgame/scenario.hpp"

namespace phgame {

struct RunSummary {
    std::string scenario;
    TerminationReason reason = TerminationReason::t_max_reached;
    std::string diagnostic;
    double final_time = 0.0;
    double final_hamiltonian = 0.0;
    double final_pseudo_gradient_norm = 0.0;
    double wall_time_seconds = 0.0;
    std::size_t samples = 0;
    std::size_t steps = 0;
    std::size_t rejected_steps = 0;
    double max_step_increase = 0.0;
    std::size_t steps_above_tolerance = 0;
    std::string verdict;
};

struct RunArtifacts {
    std::filesystem::path trajectory_path;
    std::filesystem::path report_path;
    std::filesystem::path summary_path;
    RunSummary summary;
    EquilibriumReport report;
    Trajectory trajectory;
};

/// Simulates, certifies the final sample, and writes trajectory.csv,
/// equilibrium.json and summary.json into `output_dir` (created if needed).
/// Numeric outputs depend only on the scenario.
RunArtifacts run(const Scenario& scenario, const std::filesystem::path& output_dir);

/// Simulation and certification without touching the filesystem.
RunArtifacts run_in_memory(const Scenario& scenario);

/// t, q_1_x.., p_1_x.., dist_e1.., H, u_norm. Coordinates are named x, y, z
/// for n <= 3 and c1, c2, ... otherwise.
std::vector<std::string> trajectory_columns(const Network& network);

/// One row per sample, %.17g, comma separated, header first.
std::string format_trajectory(const Network& network, const Trajectory& trajectory);

struct TrajectoryTable {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};

/// Throws ParseError on ragged rows or non-numeric fields.
TrajectoryTable parse_trajectory(std::string_view text);
TrajectoryTable read_trajectory(const std::filesystem::path& path);

std::string format_equilibrium_report(const EquilibriumReport& report);
EquilibriumReport parse_equilibrium_report(std::string_view text);

std::string format_summary(const RunSummary& summary);
RunSummary parse_summary(std::string_view text);

/// Reads a whole file; throws ParseError if it cannot be opened.
std::string read_text(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, std::string_view text);

}  // namespace phgame
