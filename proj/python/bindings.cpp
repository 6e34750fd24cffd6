#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <optional>
#include <sstream>
#include <string>

#include "fuzzy_l1/closed_loop.hpp"
#include "fuzzy_l1/commands.hpp"
#include "fuzzy_l1/errors.hpp"
#include "fuzzy_l1/fuzzy_gain.hpp"
#include "fuzzy_l1/plant.hpp"
#include "fuzzy_l1/pso.hpp"
#include "fuzzy_l1/scenario_io.hpp"

namespace py = pybind11;
using namespace fuzzy_l1;

namespace {

py::array_t<double> to_array(const std::vector<double>& v) { return py::array_t<double>(v.size(), v.data()); }

Particle particle_or_default(const std::optional<Particle>& p) { return p ? *p : default_tuned_particle(); }

SimulationOptions options_for(double duration, double dt, int substeps) {
  SimulationOptions opts;
  opts.grid = TimeGrid{0.0, duration, dt};
  opts.substeps = substeps;
  opts.validate();
  return opts;
}

py::dict sets_dict(const MFSet& sets) {
  py::dict d;
  for (std::size_t i = 0; i < kLabelCount; ++i) {
    const auto& mf = sets[i];
    d[py::str(std::string(label_name(static_cast<Label>(i))))] = py::make_tuple(mf.l, mf.c, mf.h);
  }
  return d;
}

py::dict simulate_py(const std::string& scenario, const std::string& mode, double duration, double dt, int substeps,
                     const std::optional<Particle>& particle) {
  const PlantScenario plant = make_scenario(parse_scenario_id(scenario));
  const SimulationOptions opts = options_for(duration, dt, substeps);
  Trajectory traj;
  if (parse_controller_mode(mode) == ControllerMode::Constant) {
    const ConstantGain gains(plant.feedback_gain);
    py::gil_scoped_release release;
    traj = simulate(plant, gains, opts);
  } else {
    const FuzzyGain gains(make_tuner(plant, decode(particle_or_default(particle)).sets));
    py::gil_scoped_release release;
    traj = simulate(plant, gains, opts);
  }
  py::dict out;
  out["t"] = to_array(traj.t);
  out["r"] = to_array(traj.r);
  out["y"] = to_array(traj.y);
  out["u"] = to_array(traj.u);
  out["e"] = to_array(traj.e);
  out["k_f"] = to_array(traj.k_f);
  out["omega_hat"] = to_array(traj.omega_hat);
  out["theta_hat"] = to_array(traj.theta_hat);
  out["sigma_hat"] = to_array(traj.sigma_hat);
  out["x1"] = to_array(traj.x1);
  out["x2"] = to_array(traj.x2);
  out["diverged"] = traj.diverged;
  out["t_fail"] = traj.diverged ? py::object(py::float_(traj.t_fail)) : py::object(py::none());
  return out;
}

py::dict tune_py(const std::string& scenario, int population, int generations, std::uint64_t seed, double duration,
                 double gamma1, double gamma2, int workers) {
  SwarmConfig cfg;
  cfg.population = population;
  cfg.generations = generations;
  cfg.seed = seed;
  cfg.gamma1 = gamma1;
  cfg.gamma2 = gamma2;
  cfg.workers = workers;
  cfg.validate();
  const PlantScenario plant = make_scenario(parse_scenario_id(scenario));
  const SimulationOptions opts = options_for(duration, 0.01, 2000);
  SwarmResult result;
  {
    py::gil_scoped_release release;
    result = run_pso(cfg, [&](const Particle& p) { return evaluate_objective(p, plant, opts, gamma1, gamma2); });
  }
  py::dict out;
  out["best"] = result.best;
  out["best_value"] = result.best_value;
  out["history"] = result.history;
  out["evaluations"] = result.evaluations;
  out["output_sets"] = sets_dict(decode(result.best).sets);
  return out;
}

int run_py(const std::string& command, const std::filesystem::path& config, std::optional<std::uint64_t> seed,
           std::optional<std::filesystem::path> out_dir) {
  std::ostringstream out, err;
  int code = 0;
  {
    py::gil_scoped_release release;
    code = run_command(command, config, seed, out_dir, out, err);
  }
  py::print(out.str(), py::arg("end") = "");
  if (!err.str().empty()) py::print(err.str(), py::arg("end") = "", py::arg("file") = py::module_::import("sys").attr("stderr"));
  return code;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Fuzzy-scheduled L1 adaptive controller with swarm-tuned output sets";

  auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<ConfigError>(m, "ConfigError", base.ptr());
  py::register_exception<DivergenceError>(m, "DivergenceError", base.ptr());

  m.attr("PARTICLE_DIM") = kParticleDim;
  m.attr("DIVERGENCE_PENALTY") = kDivergencePenalty;
  m.attr("SCENARIOS") = py::make_tuple("case1", "case2", "case3");

  m.def("simulate", &simulate_py, py::arg("scenario") = "case1", py::arg("mode") = "fuzzy",
        py::arg("duration") = 40.0, py::arg("dt") = 0.01, py::arg("substeps") = 2000,
        py::arg("particle") = std::nullopt,
        "Closed-loop run; returns the trajectory columns as arrays plus divergence status.");

  m.def("tune", &tune_py, py::arg("scenario") = "case1", py::arg("population") = 10, py::arg("generations") = 10,
        py::arg("seed") = 1, py::arg("duration") = 8.0, py::arg("gamma1") = 1.0, py::arg("gamma2") = 1e-6,
        py::arg("workers") = 1);

  m.def(
      "select_gain",
      [](double e, double e_dot, const std::optional<Particle>& particle, const std::string& scenario) {
        const PlantScenario plant = make_scenario(parse_scenario_id(scenario));
        return select_gain(make_tuner(plant, decode(particle_or_default(particle)).sets), e, e_dot);
      },
      py::arg("e"), py::arg("e_dot"), py::arg("particle") = std::nullopt, py::arg("scenario") = "case1");

  m.def(
      "decode",
      [](const Particle& p) {
        const DecodedSets d = decode(p);
        return py::make_tuple(sets_dict(d.sets), d.repaired);
      },
      py::arg("particle"), "Output sets for a particle and whether any triple needed reordering.");

  m.def("particle_bounds", [] {
    const auto& b = particle_bounds();
    return py::make_tuple(b.lower, b.upper);
  });
  m.def("default_particle", [] { return default_tuned_particle(); });

  m.def("run", &run_py, py::arg("command"), py::arg("config"), py::arg("seed") = std::nullopt,
        py::arg("out_dir") = std::nullopt, "CLI-equivalent entry point; returns the process exit code.");
}
