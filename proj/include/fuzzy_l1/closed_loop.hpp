#pragma once

#include <cstddef>
#include <memory>
#include <vector>

#include <Eigen/Dense>

#include "fuzzy_l1/fuzzy_gain.hpp"
#include "fuzzy_l1/l1_adaptive.hpp"
#include "fuzzy_l1/plant.hpp"
#include "fuzzy_l1/sim_core.hpp"

namespace fuzzy_l1 {

/// Source of the active feedback gain, queried once per recorded step.
class GainSchedule {
 public:
  virtual ~GainSchedule() = default;
  virtual double gain(double e, double e_dot) const = 0;
};

class ConstantGain final : public GainSchedule {
 public:
  explicit ConstantGain(double k) : k_(k) {}
  double gain(double, double) const override { return k_; }

 private:
  double k_;
};

class FuzzyGain final : public GainSchedule {
 public:
  explicit FuzzyGain(FuzzyGainTuner tuner) : tuner_(std::move(tuner)) { tuner_.validate(); }
  double gain(double e, double e_dot) const override { return select_gain(tuner_, e, e_dot); }
  const FuzzyGainTuner& tuner() const { return tuner_; }

 private:
  FuzzyGainTuner tuner_;
};

// r(t) = amplitude * cos(frequency * t)
struct Reference {
  double amplitude = 1.0;
  double frequency = 0.5;
  double operator()(double t) const;
};

struct SimulationOptions {
  TimeGrid grid{0.0, 40.0, 0.01};
  // RK4 sub-steps per recorded interval; every block runs on the sub-step.
  int substeps = 2000;
  Reference reference;

  void validate() const;
};

// Quantities derived once from a scenario: baseline feedback, A_m, P, k_g.
struct ControllerDesign {
  Eigen::RowVector2d K = Eigen::RowVector2d::Zero();
  Eigen::Matrix2d Am = Eigen::Matrix2d::Zero();
  Eigen::Matrix2d P = Eigen::Matrix2d::Identity();
  double k_g = 1.0;
};

ControllerDesign design_controller(const PlantScenario& scenario);

struct ClosedLoopState {
  PlantState plant;
  L1State l1;
  double previous_error = 0.0;
  bool has_previous_error = false;
};

ClosedLoopState initial_state(const PlantScenario& scenario, const ControllerDesign& design);

struct StepRecord {
  double t = 0.0;
  Eigen::Vector2d x = Eigen::Vector2d::Zero();
  Eigen::Vector2d x_hat = Eigen::Vector2d::Zero();
  double u = 0.0;
  double y = 0.0;
  double r = 0.0;
  double e = 0.0;
  double k_f = 0.0;
  AdaptiveEstimates estimates;
};

/// Samples the loop at time t, queries the gain schedule, then advances
/// plant, predictor, adaptation and control law to t + dt in `substeps`
/// synchronized sub-steps. Returns the record taken at t. Propagates
/// DivergenceError from the plant.
StepRecord l1_closed_loop_step(const PlantScenario& scenario, const ControllerDesign& design, ClosedLoopState& state,
                               const GainSchedule& gains, const Reference& reference, double t, double dt,
                               int substeps);

struct Trajectory {
  std::vector<double> t, r, y, u, e, k_f, omega_hat, theta_hat, sigma_hat, x1, x2, x_hat1, x_hat2;
  bool diverged = false;
  double t_fail = 0.0;

  std::size_t size() const { return t.size(); }
  void reserve(std::size_t n);
  void push(const StepRecord& rec);
};

/// Runs the closed loop over the grid. On divergence the trajectory holds
/// every sample recorded before the failure and `diverged` is set.
Trajectory simulate(const PlantScenario& scenario, const GainSchedule& gains, const SimulationOptions& options);

}  // namespace fuzzy_l1
