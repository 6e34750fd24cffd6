#include "fuzzy_l1/closed_loop.hpp"

#include <cmath>

namespace fuzzy_l1 {

double Reference::operator()(double t) const { return amplitude * std::cos(frequency * t); }

void SimulationOptions::validate() const {
  grid.validate();
  if (substeps < 1) throw ConfigError("substeps", "substeps must be at least 1");
}

ControllerDesign design_controller(const PlantScenario& scenario) {
  scenario.validate();
  const std::vector<std::complex<double>> poles{scenario.pole, std::conj(scenario.pole)};
  const PolePlacement placement = place_poles(scenario.A, scenario.B, poles);
  ControllerDesign d;
  d.K = placement.K;
  d.Am = placement.Am;
  d.P = lyapunov_solve(placement.Am, scenario.Q);
  d.k_g = feedforward_gain(placement.Am, scenario.B, scenario.C);
  return d;
}

ClosedLoopState initial_state(const PlantScenario& scenario, const ControllerDesign& design) {
  ClosedLoopState s;
  s.plant.x = scenario.x0;
  s.l1.estimates = scenario.initial_estimates;
  s.l1.P = design.P;
  s.l1.k_g = design.k_g;
  s.l1.gamma = scenario.adaptation_gain;
  return s;
}

StepRecord l1_closed_loop_step(const PlantScenario& scenario, const ControllerDesign& design, ClosedLoopState& state,
                               const GainSchedule& gains, const Reference& reference, double t, double dt,
                               int substeps) {
  StepRecord rec;
  rec.t = t;
  rec.x = state.plant.x;
  rec.x_hat = state.l1.x_hat;
  rec.u = state.l1.u_int;
  rec.y = scenario.C * state.plant.x;
  rec.r = reference(t);
  rec.e = rec.r - rec.y;
  rec.estimates = state.l1.estimates;

  const double e_dot = state.has_previous_error ? (rec.e - state.previous_error) / dt : 0.0;
  state.previous_error = rec.e;
  state.has_previous_error = true;
  const double k_active = gains.gain(rec.e, e_dot);
  rec.k_f = k_active;

  const double h = dt / substeps;
  L1State& l1 = state.l1;
  for (int s = 0; s < substeps; ++s) {
    const double ts = t + s * h;
    const Eigen::Vector2d x = state.plant.x;
    const double u = l1.u_int;
    // Baseline feedback realizing A_m shares the actuator channel with u.
    const double command = u - design.K * x;

    const PlantStepResult plant = plant_step(scenario, state.plant, command, ts, h);
    l1.x_hat = predictor_step(l1.x_hat, x, u, l1.estimates, design.Am, scenario.B, h);
    const Eigen::Vector2d x_tilde = l1.x_hat - plant.state.x;
    l1.estimates = adaptation_step(l1.estimates, x_tilde, x, u, l1.P, scenario.B, l1.gamma, scenario.bounds, h);
    const double eta = eta_hat(l1.estimates, x, u);
    l1.u_int = control_step(l1.u_int, eta, reference(ts), l1.k_g, k_active, h).u;
    state.plant = plant.state;
  }
  return rec;
}

void Trajectory::reserve(std::size_t n) {
  for (auto* v : {&t, &r, &y, &u, &e, &k_f, &omega_hat, &theta_hat, &sigma_hat, &x1, &x2, &x_hat1, &x_hat2}) {
    v->reserve(n);
  }
}

void Trajectory::push(const StepRecord& rec) {
  t.push_back(rec.t);
  r.push_back(rec.r);
  y.push_back(rec.y);
  u.push_back(rec.u);
  e.push_back(rec.e);
  k_f.push_back(rec.k_f);
  omega_hat.push_back(rec.estimates.omega);
  theta_hat.push_back(rec.estimates.theta);
  sigma_hat.push_back(rec.estimates.sigma);
  x1.push_back(rec.x(0));
  x2.push_back(rec.x(1));
  x_hat1.push_back(rec.x_hat(0));
  x_hat2.push_back(rec.x_hat(1));
}

Trajectory simulate(const PlantScenario& scenario, const GainSchedule& gains, const SimulationOptions& options) {
  options.validate();
  const ControllerDesign design = design_controller(scenario);
  ClosedLoopState state = initial_state(scenario, design);
  const TimeGrid& grid = options.grid;
  const std::size_t n = grid.steps();

  Trajectory traj;
  traj.reserve(n + 1);
  for (std::size_t i = 0; i <= n; ++i) {
    const double t = grid.time(i);
    if (i == n) {
      // Final sample: record without advancing.
      ClosedLoopState probe = state;
      traj.push(l1_closed_loop_step(scenario, design, probe, gains, options.reference, t, grid.dt, 0));
      break;
    }
    try {
      traj.push(l1_closed_loop_step(scenario, design, state, gains, options.reference, t, grid.dt,
                                    options.substeps));
    } catch (const DivergenceError& err) {
      traj.diverged = true;
      traj.t_fail = err.time();
      break;
    }
  }
  return traj;
}

}  // namespace fuzzy_l1
