#include "fuzzy_l1/commands.hpp"

#include <fstream>
#include <future>
#include <ostream>

#include <json.hpp>

#include "fuzzy_l1/errors.hpp"

namespace fuzzy_l1 {

namespace {

std::string stem(const RunConfig& cfg) { return std::string(to_string(cfg.scenario)); }

nlohmann::ordered_json optional_json(const std::optional<double>& v) {
  return v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json(nullptr);
}

nlohmann::ordered_json summary_json(const TrajectorySummary& s) {
  return {{"rms_error", s.rms_error},
          {"max_abs_u", s.max_abs_u},
          {"max_abs_e", s.max_abs_e},
          {"rms_error_after_5s", optional_json(s.rms_error_after_5s)},
          {"max_abs_u_after_1s", optional_json(s.max_abs_u_after_1s)},
          {"diverged", s.diverged},
          {"t_fail", s.diverged ? nlohmann::ordered_json(s.t_fail) : nlohmann::ordered_json(nullptr)},
          {"samples", s.samples}};
}

void write_json(const std::filesystem::path& path, const nlohmann::ordered_json& j) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

void write_status(const RunConfig& cfg, ControllerMode mode, const Trajectory& traj) {
  nlohmann::ordered_json j{{"scenario", stem(cfg)},
                           {"mode", to_string(mode)},
                           {"diverged", traj.diverged},
                           {"t_fail", traj.diverged ? nlohmann::ordered_json(traj.t_fail) : nlohmann::ordered_json(nullptr)},
                           {"rows", traj.size()}};
  write_json(status_path(cfg, mode), j);
}

}  // namespace

std::filesystem::path trajectory_path(const RunConfig& cfg, ControllerMode mode) {
  return cfg.out_dir / (stem(cfg) + "_" + std::string(to_string(mode)) + ".csv");
}
std::filesystem::path status_path(const RunConfig& cfg, ControllerMode mode) {
  return cfg.out_dir / (stem(cfg) + "_" + std::string(to_string(mode)) + "_status.json");
}
std::filesystem::path summary_path(const RunConfig& cfg) { return cfg.out_dir / (stem(cfg) + "_summary.json"); }
std::filesystem::path tuning_result_path(const RunConfig& cfg) { return cfg.out_dir / "tuning_result.json"; }
std::filesystem::path convergence_path(const RunConfig& cfg) { return cfg.out_dir / "convergence.csv"; }

std::unique_ptr<GainSchedule> make_gain_schedule(const RunConfig& cfg, const PlantScenario& plant, ControllerMode mode) {
  if (mode == ControllerMode::Constant) return std::make_unique<ConstantGain>(plant.feedback_gain);
  const Particle p = cfg.tuner_params ? load_tuned_particle(*cfg.tuner_params) : default_tuned_particle();
  return std::make_unique<FuzzyGain>(make_tuner(plant, decode(p).sets));
}

Trajectory run_simulation(const RunConfig& cfg, ControllerMode mode) {
  const PlantScenario plant = cfg.make_plant();
  const auto gains = make_gain_schedule(cfg, plant, mode);
  return simulate(plant, *gains, cfg.simulation_options());
}

int cmd_simulate(const RunConfig& cfg, std::ostream& log) {
  const Trajectory traj = run_simulation(cfg, cfg.mode);
  write_trajectory_csv(trajectory_path(cfg, cfg.mode), traj);
  write_status(cfg, cfg.mode, traj);
  log << stem(cfg) << " " << to_string(cfg.mode) << ": " << traj.size() << " rows -> "
      << trajectory_path(cfg, cfg.mode).string() << '\n';
  if (traj.diverged) {
    log << "diverged at t = " << traj.t_fail << '\n';
    return kExitDiverged;
  }
  return kExitOk;
}

int cmd_tune(const RunConfig& cfg, std::ostream& log) {
  const PlantScenario plant = cfg.make_plant();
  const SimulationOptions options = cfg.tuning_options();
  const SwarmConfig& sw = cfg.tune.swarm;
  TuningResult tuning{sw, cfg.tune.duration, {}};
  tuning.result = run_pso(sw, [&](const Particle& p) {
    return evaluate_objective(p, plant, options, sw.gamma1, sw.gamma2);
  });
  write_tuning_result(tuning_result_path(cfg), tuning);
  write_convergence_csv(convergence_path(cfg), tuning.result.history);
  log << "tuned " << sw.population << "x" << sw.generations << " (seed " << sw.seed
      << "): best = " << format_double(tuning.result.best_value) << " -> " << tuning_result_path(cfg).string() << '\n';
  return kExitOk;
}

int cmd_compare(const RunConfig& cfg, std::ostream& log) {
  auto constant = std::async(std::launch::async, [&] { return run_simulation(cfg, ControllerMode::Constant); });
  auto fuzzy = std::async(std::launch::async, [&] { return run_simulation(cfg, ControllerMode::Fuzzy); });
  const Trajectory tc = constant.get();
  const Trajectory tf = fuzzy.get();

  for (auto [mode, traj] : {std::pair{ControllerMode::Constant, &tc}, std::pair{ControllerMode::Fuzzy, &tf}}) {
    write_trajectory_csv(trajectory_path(cfg, mode), *traj);
    write_status(cfg, mode, *traj);
  }
  const TrajectorySummary sc = summarize(tc);
  const TrajectorySummary sf = summarize(tf);
  write_json(summary_path(cfg), {{"scenario", stem(cfg)}, {"constant", summary_json(sc)}, {"fuzzy", summary_json(sf)}});

  for (auto [name, s] : {std::pair{"constant", &sc}, std::pair{"fuzzy", &sf}}) {
    log << name << ": rms_error " << format_double(s->rms_error) << ", max|u| " << format_double(s->max_abs_u);
    if (s->diverged) log << ", diverged at t = " << s->t_fail;
    log << '\n';
  }
  const bool expected_split = cfg.scenario == ScenarioId::Case3 && sc.diverged && !sf.diverged;
  if ((!sc.diverged && !sf.diverged) || expected_split) return kExitOk;
  return kExitDiverged;
}

int run_command(std::string_view command, const std::filesystem::path& config_path,
                std::optional<std::uint64_t> seed, std::optional<std::filesystem::path> out_dir, std::ostream& out,
                std::ostream& err) {
  try {
    RunConfig cfg = load_config(config_path);
    if (seed) cfg.seed = cfg.tune.swarm.seed = *seed;
    if (out_dir) cfg.out_dir = *out_dir;
    if (command == "simulate") return cmd_simulate(cfg, out);
    if (command == "tune") return cmd_tune(cfg, out);
    if (command == "compare") return cmd_compare(cfg, out);
    err << "unknown command \"" << command << "\"\n";
    return kExitConfigError;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfigError;
  }
}

}  // namespace fuzzy_l1
