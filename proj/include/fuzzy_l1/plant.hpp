#pragma once

#include <array>
#include <complex>
#include <optional>
#include <string>
#include <string_view>

#include <Eigen/Dense>

#include "fuzzy_l1/l1_adaptive.hpp"
#include "fuzzy_l1/sim_core.hpp"

namespace fuzzy_l1 {

enum class ScenarioId { Case1, Case2, Case3 };
// None (f = 0) and Parametric (f = theta |x|_inf + sigma) are analysis plants.
enum class NonlinearityKind { Case1, Case2, None, Parametric };

std::string_view to_string(ScenarioId id);
ScenarioId parse_scenario_id(std::string_view name);

// First-order filter x' = a x + b u, y = c x.
struct FirstOrderFilter {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
  static FirstOrderFilter from_model(const StateSpaceModel& m);
};

struct SecondOrderFilter {
  Eigen::Matrix2d A = Eigen::Matrix2d::Zero();
  Eigen::Vector2d b = Eigen::Vector2d::Zero();
  Eigen::RowVector2d c = Eigen::RowVector2d::Zero();
  static SecondOrderFilter from_model(const StateSpaceModel& m);
};

/// One benchmark plant with every run constant of the controller around it.
struct PlantScenario {
  ScenarioId id = ScenarioId::Case1;
  NonlinearityKind nonlinearity = NonlinearityKind::Case1;

  Eigen::Matrix2d A = (Eigen::Matrix2d() << 0.0, 1.0, 0.0, 0.0).finished();
  Eigen::Vector2d B = Eigen::Vector2d(0.0, 1.0);
  Eigen::RowVector2d C = Eigen::RowVector2d(1.0, 0.0);

  FirstOrderFilter actuator;                    // 75 / (s + 75)
  bool actuator_enabled = true;                 // false feeds u straight into the plant
  std::optional<SecondOrderFilter> disturbance;  // (s - 1) / (s^2 + 3 s + 2), cases 2 and 3

  std::complex<double> pole{-21.0, 0.743};  // and its conjugate
  double feedback_gain = 20.0;              // constant k
  double adaptation_gain = 1e6;             // Gamma
  Eigen::Matrix2d Q = Eigen::Matrix2d::Identity();
  ProjectionBounds bounds;
  AdaptiveEstimates initial_estimates;

  double kp = 0.1;
  double kd = 0.05;
  double ke = 0.1;

  // True input gain and Parametric-kind constants; the controller never sees them.
  double input_gain = 1.0;
  double theta_true = 0.0;
  double sigma_true = 0.0;

  Eigen::Vector2d x0 = Eigen::Vector2d::Zero();
  double divergence_threshold = 1e3;

  void validate() const;
};

PlantScenario make_scenario(ScenarioId id);

struct PlantState {
  Eigen::Vector2d x = Eigen::Vector2d::Zero();
  double x_act = 0.0;
  Eigen::Vector2d x_dist = Eigen::Vector2d::Zero();
};

double f_case1(const Eigen::Vector2d& x);

// z is the disturbance-filter output; the cos(x2^2 + 0.5 cos(0.3 t)) grouping is the adopted reading.
double f_case2(const Eigen::Vector2d& x, double z, double t);

// v(t) = x1 sin(0.2 t) + x2, the input of the unmodeled-dynamics filter.
double disturbance_input(const Eigen::Vector2d& x, double t);

struct PlantStepResult {
  PlantState state;
  double y = 0.0;
};

/// Advances plant, actuator lag and disturbance filter over dt with the
/// actuator command u held constant. Throws DivergenceError when the plant
/// state leaves the detector threshold.
PlantStepResult plant_step(const PlantScenario& scenario, const PlantState& state, double u, double t, double dt);

}  // namespace fuzzy_l1
