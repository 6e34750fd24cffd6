#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "fuzzy_l1/plant.hpp"

using namespace fuzzy_l1;
using doctest::Approx;

namespace {

// Shared skeleton of both nonlinearities with explicit coefficient envelopes.
struct Envelopes {
  double a1, a2, a3, bias, a5, phase, a6;
};

double skeleton(const Envelopes& k, double x1, double x2, double z) {
  return k.a1 * x1 * x1 + k.a2 * x2 * x2 + k.a3 * x1 * std::sin(x1 * x1) + k.bias +
         k.a5 * x2 * std::cos(x2 * x2 + k.phase) + k.a6 * z * z;
}

Envelopes case2_envelopes(double t) {
  return {std::sin(0.4 * t) + 1.0,
          2.0 * std::cos(0.35 * t) + 0.5,
          std::sin(0.3 * t) + 0.3,
          std::sin(0.35 * t) * std::cos(0.4 * t),
          0.5,
          0.5 * std::cos(0.3 * t),
          std::sin(0.3 * t) * std::cos(0.4 * t)};
}

}  // namespace

TEST_CASE("case-1 nonlinearity") {
  CHECK(f_case1({0, 0}) == 0.0);
  CHECK(f_case1({1, 0}) == Approx(2.8414709848).epsilon(1e-10));
  CHECK(f_case1({0, 1}) == Approx(2.5403023059).epsilon(1e-10));
}

TEST_CASE("case-2 nonlinearity") {
  CHECK(f_case2({0, 0}, 0, 0) == 0.0);
  CHECK(f_case2({1, 0}, 0, 0) == Approx(1.2524412954).epsilon(1e-10));

  const double t = std::numbers::pi / (2 * 0.3);
  const long double tl = t;
  const long double oracle = std::sin(0.35L * tl) * std::cos(0.4L * tl) + std::sin(0.3L * tl) * std::cos(0.4L * tl);
  CHECK(f_case2({0, 0}, 1, t) == Approx(static_cast<double>(oracle)).epsilon(1e-12));
}

TEST_CASE("both nonlinearities share one term skeleton") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-2.0, 2.0), tt(0.0, 40.0);
  for (int i = 0; i < 200; ++i) {
    const double x1 = u(rng), x2 = u(rng), z = u(rng), t = tt(rng);
    CHECK(f_case2({x1, x2}, z, t) == Approx(skeleton(case2_envelopes(t), x1, x2, z)).epsilon(1e-12));
    CHECK(f_case1({x1, x2}) == Approx(skeleton({2, 2, 1, 0, 1, 0, 0}, x1, x2, 0.0)).epsilon(1e-12));
  }
}

TEST_CASE("scenario constants") {
  const auto s1 = make_scenario(ScenarioId::Case1);
  const auto s3 = make_scenario(ScenarioId::Case3);
  CHECK(s1.pole == std::complex<double>(-21, 0.743));
  CHECK(s3.pole == std::complex<double>(-84, 0.743));
  CHECK(s1.feedback_gain == 20.0);
  CHECK(s1.adaptation_gain == 1e6);
  CHECK(s1.bounds.sigma_bound == 100.0);
  CHECK(s1.bounds.theta_bound == 10.0);
  CHECK(s1.bounds.omega_lower == 0.0);
  CHECK(s1.bounds.omega_upper == 10.0);
  CHECK(s1.kp == 0.1);
  CHECK(s1.kd == 0.05);
  CHECK(s1.ke == 0.1);
  CHECK_FALSE(s1.disturbance.has_value());
  CHECK(s3.disturbance.has_value());
  CHECK(parse_scenario_id("case2") == ScenarioId::Case2);
  CHECK_THROWS_AS(parse_scenario_id("case4"), ConfigError);
}

TEST_CASE("disturbance filter poles") {
  const auto d = *make_scenario(ScenarioId::Case2).disturbance;
  const double tr = d.A.trace(), det = d.A.determinant();
  const double disc = std::sqrt(tr * tr - 4 * det);
  CHECK(std::abs(0.5 * (tr - disc) + 2.0) < 1e-9);
  CHECK(std::abs(0.5 * (tr + disc) + 1.0) < 1e-9);
}

TEST_CASE("plant at rest stays at rest") {
  for (auto id : {ScenarioId::Case1, ScenarioId::Case2}) {
    const auto s = make_scenario(id);
    PlantState st;
    for (int i = 0; i < 100; ++i) {
      // Case 2 carries a pure-time forcing term; only case 1 is an equilibrium.
      auto r = plant_step(s, st, 0.0, i * 0.01, 0.01);
      if (id == ScenarioId::Case1) {
        CHECK(r.state.x.isZero(0.0));
        CHECK(r.y == 0.0);
      }
      st = r.state;
    }
  }
}

TEST_CASE("actuator lag has unit DC gain") {
  const auto s = make_scenario(ScenarioId::Case1);
  const auto& a = s.actuator;
  double xa = 0.0;
  const double h = 1e-3;
  for (int i = 0; i < 1000; ++i) xa = rk4_step([&](double v, double) { return a.a * v + a.b * 1.0; }, xa, i * h, h);
  CHECK(std::abs(a.c * xa - 1.0) < 1e-9);

  double xb = 0.0;
  for (int i = 0; i < 200; ++i) xb = rk4_step([&](double v, double) { return a.a * v + a.b * 1.0; }, xb, i * h, h);
  CHECK(std::abs(a.c * xb - 1.0) < 1e-6);
}

TEST_CASE("case-1 free response matches an independent fine integrator") {
  const auto s = make_scenario(ScenarioId::Case1);
  PlantState st;
  st.x = {0.1, 0.0};
  // Oracle: straight-line RK4 of x1' = x2, x2' = f(x), actuator idle, at dt/10.
  double o1 = 0.1, o2 = 0.0;
  auto f = [](double x1, double x2) {
    return 2 * x1 * x1 + 2 * x2 * x2 + x1 * std::sin(x1 * x1) + x2 * std::cos(x2 * x2);
  };
  const double H = 0.01, h = H / 10;
  for (int i = 0; i < 100; ++i) {
    st = plant_step(s, st, 0.0, i * H, H).state;
    for (int j = 0; j < 10; ++j) {
      const double k1a = o2, k1b = f(o1, o2);
      const double k2a = o2 + h / 2 * k1b, k2b = f(o1 + h / 2 * k1a, o2 + h / 2 * k1b);
      const double k3a = o2 + h / 2 * k2b, k3b = f(o1 + h / 2 * k2a, o2 + h / 2 * k2b);
      const double k4a = o2 + h * k3b, k4b = f(o1 + h * k3a, o2 + h * k3b);
      o1 += h / 6 * (k1a + 2 * k2a + 2 * k3a + k4a);
      o2 += h / 6 * (k1b + 2 * k2b + 2 * k3b + k4b);
    }
    CHECK(st.x(0) == Approx(o1).epsilon(1e-9));
    CHECK(st.x(1) == Approx(o2).epsilon(1e-9));
  }
}

TEST_CASE("plant step is deterministic") {
  const auto s = make_scenario(ScenarioId::Case2);
  PlantState st;
  st.x = {0.3, -0.2};
  st.x_act = 0.1;
  st.x_dist = {0.05, -0.01};
  const auto a = plant_step(s, st, 1.7, 3.2, 0.01);
  const auto b = plant_step(s, st, 1.7, 3.2, 0.01);
  CHECK(a.state.x == b.state.x);
  CHECK(a.state.x_act == b.state.x_act);
  CHECK(a.state.x_dist == b.state.x_dist);
}

TEST_CASE("divergence detector") {
  auto s = make_scenario(ScenarioId::Case1);
  PlantState st;
  st.x = {999.0, 1e4};
  try {
    plant_step(s, st, 0.0, 2.0, 0.01);
    FAIL("expected DivergenceError");
  } catch (const DivergenceError& e) {
    CHECK(e.time() == Approx(2.01));
  }
}
