#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fuzzy_l1/closed_loop.hpp"
#include "fuzzy_l1/plant.hpp"
#include "fuzzy_l1/pso.hpp"

namespace fuzzy_l1 {

enum class ControllerMode { Constant, Fuzzy };

std::string_view to_string(ControllerMode mode);
ControllerMode parse_controller_mode(std::string_view name);

// Optional replacements for the case constants; unset fields keep the defaults.
struct ScenarioOverrides {
  std::optional<double> pole_real, pole_imag;
  std::optional<double> feedback_gain, adaptation_gain;
  std::optional<double> kp, kd, ke;
  std::optional<double> omega_lower, omega_upper, theta_bound, sigma_bound, epsilon;
  std::optional<double> divergence_threshold;
  std::optional<std::array<double, 2>> x0;

  void apply(PlantScenario& scenario) const;
};

struct TuneSettings {
  SwarmConfig swarm;
  double duration = 8.0;  // rollout length in seconds
};

struct RunConfig {
  ScenarioId scenario = ScenarioId::Case1;
  ControllerMode mode = ControllerMode::Fuzzy;
  double duration = 40.0;
  double dt = 0.01;
  int substeps = 2000;
  Reference reference;
  std::filesystem::path out_dir = "out";
  std::optional<std::filesystem::path> tuner_params;
  std::uint64_t seed = 1;
  TuneSettings tune;
  ScenarioOverrides overrides;

  void validate() const;
  PlantScenario make_plant() const;
  SimulationOptions simulation_options() const;
  SimulationOptions tuning_options() const;
};

/// Parses a JSON run configuration. Unknown keys and invalid values raise
/// ConfigError naming the key; messages carry the line number in `source`.
RunConfig parse_config(std::string_view text, std::string_view source = "<config>");
RunConfig load_config(const std::filesystem::path& path);

// ---- trajectory CSV ----

inline constexpr std::string_view kTrajectoryHeader = "t,r,y,u,e,k_f,omega_hat,theta_hat,sigma_hat,x1,x2";

struct CsvTable {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

std::string format_double(double v);
void write_trajectory_csv(std::ostream& os, const Trajectory& traj);
void write_trajectory_csv(const std::filesystem::path& path, const Trajectory& traj);
CsvTable read_csv(std::istream& is);
CsvTable read_csv(const std::filesystem::path& path);
void write_csv(std::ostream& os, const CsvTable& table);

// ---- metrics and result files ----

struct TrajectorySummary {
  double rms_error = 0.0;  // over every recorded sample
  double max_abs_u = 0.0;
  double max_abs_e = 0.0;
  // Unset when the run ends before the window opens.
  std::optional<double> rms_error_after_5s;
  std::optional<double> max_abs_u_after_1s;
  bool diverged = false;
  double t_fail = 0.0;
  std::size_t samples = 0;
};

// RMS of e and max |u| restricted to samples with t >= t_from.
double rms_error(const Trajectory& traj, double t_from = 0.0);
double max_abs_u(const Trajectory& traj, double t_from = 0.0);
TrajectorySummary summarize(const Trajectory& traj);

struct TuningResult {
  SwarmConfig swarm;
  double duration = 8.0;
  SwarmResult result;
};

void write_tuning_result(const std::filesystem::path& path, const TuningResult& tuning);
void write_convergence_csv(const std::filesystem::path& path, const std::vector<double>& history);

/// Reads the best particle from a tuning result file.
Particle load_tuned_particle(const std::filesystem::path& path);

// Output-set parameters shipped with the library (a frozen case-1 tuning run).
const Particle& default_tuned_particle();

}  // namespace fuzzy_l1
