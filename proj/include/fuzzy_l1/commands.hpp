#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string_view>

#include "fuzzy_l1/scenario_io.hpp"

namespace fuzzy_l1 {

enum ExitCode : int { kExitOk = 0, kExitConfigError = 1, kExitDiverged = 2 };

std::filesystem::path trajectory_path(const RunConfig& cfg, ControllerMode mode);
std::filesystem::path status_path(const RunConfig& cfg, ControllerMode mode);
std::filesystem::path summary_path(const RunConfig& cfg);
std::filesystem::path tuning_result_path(const RunConfig& cfg);
std::filesystem::path convergence_path(const RunConfig& cfg);

// Gain schedule for a mode, using the configured tuner file or the shipped parameters.
std::unique_ptr<GainSchedule> make_gain_schedule(const RunConfig& cfg, const PlantScenario& plant, ControllerMode mode);

Trajectory run_simulation(const RunConfig& cfg, ControllerMode mode);

int cmd_simulate(const RunConfig& cfg, std::ostream& log);
int cmd_tune(const RunConfig& cfg, std::ostream& log);
int cmd_compare(const RunConfig& cfg, std::ostream& log);

/// Loads the config, applies the command-line overrides and dispatches.
/// Configuration problems are reported on `err` with exit code 1.
int run_command(std::string_view command, const std::filesystem::path& config_path,
                std::optional<std::uint64_t> seed, std::optional<std::filesystem::path> out_dir, std::ostream& out,
                std::ostream& err);

}  // namespace fuzzy_l1
