#include "fuzzy_l1/plant.hpp"

#include <cmath>
#include <sstream>

namespace fuzzy_l1 {

std::string_view to_string(ScenarioId id) {
  switch (id) {
    case ScenarioId::Case1: return "case1";
    case ScenarioId::Case2: return "case2";
    case ScenarioId::Case3: return "case3";
  }
  return "case1";
}

ScenarioId parse_scenario_id(std::string_view name) {
  if (name == "case1") return ScenarioId::Case1;
  if (name == "case2") return ScenarioId::Case2;
  if (name == "case3") return ScenarioId::Case3;
  throw ConfigError("scenario", "unknown scenario '" + std::string(name) + "' (expected case1, case2 or case3)");
}

FirstOrderFilter FirstOrderFilter::from_model(const StateSpaceModel& m) {
  m.validate();
  if (m.order() != 1) throw DimensionError("expected a first-order realization");
  return {m.A(0, 0), m.b(0), m.c(0)};
}

SecondOrderFilter SecondOrderFilter::from_model(const StateSpaceModel& m) {
  m.validate();
  if (m.order() != 2) throw DimensionError("expected a second-order realization");
  SecondOrderFilter f;
  f.A = m.A;
  f.b = m.b;
  f.c = m.c;
  return f;
}

void PlantScenario::validate() const {
  if (!(feedback_gain > 0.0)) throw ConfigError("feedback_gain", "feedback gain k must be positive");
  if (!(adaptation_gain > 0.0)) throw ConfigError("adaptation_gain", "adaptation gain must be positive");
  if ((Q - Q.transpose()).cwiseAbs().maxCoeff() > 1e-12 || Eigen::LLT<Eigen::Matrix2d>(Q).info() != Eigen::Success) {
    throw ConfigError("q", "Q must be symmetric positive definite");
  }
  if (!(pole.real() < 0.0)) throw ConfigError("poles", "desired poles must lie in the open left half plane");
  bounds.validate();
  if (!(kp > 0.0)) throw ConfigError("kp", "kp must be positive");
  if (!(kd > 0.0)) throw ConfigError("kd", "kd must be positive");
  if (!(ke > 0.0)) throw ConfigError("ke", "ke must be positive");
  if (!(divergence_threshold > 0.0)) throw ConfigError("divergence_threshold", "threshold must be positive");
  if ((nonlinearity == NonlinearityKind::Case2) != disturbance.has_value()) {
    throw ConfigError("scenario", "disturbance filter present iff the case-2 nonlinearity is used");
  }
}

PlantScenario make_scenario(ScenarioId id) {
  PlantScenario s;
  s.id = id;
  s.actuator = FirstOrderFilter::from_model(realize_siso_tf({75.0}, {1.0, 75.0}));
  if (id != ScenarioId::Case1) {
    s.nonlinearity = NonlinearityKind::Case2;
    s.disturbance = SecondOrderFilter::from_model(realize_siso_tf({1.0, -1.0}, {1.0, 3.0, 2.0}));
  }
  if (id == ScenarioId::Case3) s.pole = {-84.0, 0.743};
  return s;
}

double f_case1(const Eigen::Vector2d& x) {
  const double x1 = x(0), x2 = x(1);
  return 2.0 * x1 * x1 + 2.0 * x2 * x2 + x1 * std::sin(x1 * x1) + x2 * std::cos(x2 * x2);
}

double f_case2(const Eigen::Vector2d& x, double z, double t) {
  const double x1 = x(0), x2 = x(1);
  return (std::sin(0.4 * t) + 1.0) * x1 * x1
       + (2.0 * std::cos(0.35 * t) + 0.5) * x2 * x2
       + (std::sin(0.3 * t) + 0.3) * x1 * std::sin(x1 * x1)
       + std::sin(0.35 * t) * std::cos(0.4 * t)
       + 0.5 * x2 * std::cos(x2 * x2 + 0.5 * std::cos(0.3 * t))
       + std::sin(0.3 * t) * std::cos(0.4 * t) * z * z;
}

double disturbance_input(const Eigen::Vector2d& x, double t) {
  return x(0) * std::sin(0.2 * t) + x(1);
}

namespace {

// Packed state: [x1, x2, x_act, x_dist1, x_dist2].
using Packed = Eigen::Matrix<double, 5, 1>;

}  // namespace

PlantStepResult plant_step(const PlantScenario& scenario, const PlantState& state, double u, double t, double dt) {
  const FirstOrderFilter& act = scenario.actuator;
  const bool has_dist = scenario.disturbance.has_value();
  const SecondOrderFilter dist = has_dist ? *scenario.disturbance : SecondOrderFilter{};

  auto deriv = [&](const Packed& s, double time) -> Packed {
    const Eigen::Vector2d x = s.head<2>();
    const Eigen::Vector2d xd = s.tail<2>();
    double f = 0.0;
    Eigen::Vector2d dxd = Eigen::Vector2d::Zero();
    if (has_dist) {
      const double z = dist.c * xd;
      f = f_case2(x, z, time);
      dxd = dist.A * xd + dist.b * disturbance_input(x, time);
    } else if (scenario.nonlinearity == NonlinearityKind::Case1) {
      f = f_case1(x);
    } else if (scenario.nonlinearity == NonlinearityKind::Parametric) {
      f = scenario.theta_true * x.cwiseAbs().maxCoeff() + scenario.sigma_true;
    }
    const double omega_out = scenario.actuator_enabled ? act.c * s(2) : u;
    Packed d;
    d.head<2>() = scenario.A * x + scenario.B * (scenario.input_gain * omega_out + f);
    d(2) = scenario.actuator_enabled ? act.a * s(2) + act.b * u : 0.0;
    d.tail<2>() = dxd;
    return d;
  };

  Packed packed;
  packed << state.x, state.x_act, state.x_dist;
  Packed next;
  try {
    next = rk4_step(deriv, packed, t, dt);
  } catch (const IntegrationFault& fault) {
    throw DivergenceError(fault.time(), fault.what());
  }

  PlantStepResult out;
  out.state.x = next.head<2>();
  out.state.x_act = next(2);
  out.state.x_dist = has_dist ? Eigen::Vector2d(next.tail<2>()) : Eigen::Vector2d::Zero();
  out.y = scenario.C * out.state.x;

  const double norm = out.state.x.cwiseAbs().maxCoeff();
  if (!(norm <= scenario.divergence_threshold)) {
    std::ostringstream os;
    os << "plant state diverged at t = " << (t + dt) << " (|x|_inf = " << norm << ")";
    throw DivergenceError(t + dt, os.str());
  }
  return out;
}

}  // namespace fuzzy_l1
