#include <doctest.h>

#include <cmath>
#include <random>

#include "fuzzy_l1/l1_adaptive.hpp"
#include "fuzzy_l1/sim_core.hpp"

using namespace fuzzy_l1;
using doctest::Approx;

namespace {
const Eigen::Vector2d kB(0.0, 1.0);
const Eigen::Matrix2d kAm = (Eigen::Matrix2d() << 0.0, 1.0, -441.552049, -42.0).finished();
}  // namespace

TEST_CASE("projection operator") {
  const auto bound = IntervalBound::symmetric(10.0);
  const double eps = 0.1;
  const double edge = 10.0 * std::sqrt(1.0 + eps);
  CHECK(projection(0.0, 5.0, bound, eps) == 5.0);
  CHECK(std::abs(projection(edge, 5.0, bound, eps)) < 1e-12);
  CHECK(projection(edge, -5.0, bound, eps) == -5.0);
  CHECK(std::abs(projection(-edge, -5.0, bound, eps)) < 1e-12);
  // Halfway into the margin band the outward drive is scaled by 1 - f.
  const double mid = 10.0 * std::sqrt(1.0 + eps / 2);
  CHECK(projection(mid, 4.0, bound, eps) == Approx(2.0));
}

TEST_CASE("projection on the asymmetric input-gain interval") {
  const ProjectionBounds pb;
  const auto w = pb.omega();
  CHECK(w.center == 5.0);
  CHECK(w.half_width == 5.0);
  const double upper_edge = 5.0 + 5.0 * std::sqrt(1.1);
  const double lower_edge = 5.0 - 5.0 * std::sqrt(1.1);
  CHECK(std::abs(projection(upper_edge, 1.0, w, pb.epsilon)) < 1e-12);
  CHECK(std::abs(projection(lower_edge, -1.0, w, pb.epsilon)) < 1e-12);
  CHECK(projection(lower_edge, 1.0, w, pb.epsilon) == 1.0);
}

TEST_CASE("projection bounds validation") {
  ProjectionBounds pb;
  CHECK_NOTHROW(pb.validate());
  pb.epsilon = 0.0;
  CHECK_THROWS_AS(pb.validate(), ConfigError);
  pb = {};
  pb.omega_upper = -1.0;
  CHECK_THROWS_AS(pb.validate(), ConfigError);
  pb = {};
  pb.sigma_bound = 0.0;
  CHECK_THROWS_AS(pb.validate(), ConfigError);
}

TEST_CASE("adaptation step") {
  const ProjectionBounds pb;
  const Eigen::Matrix2d P = Eigen::Matrix2d::Identity();
  const AdaptiveEstimates est{5.0, 1.0, -2.0};

  SUBCASE("zero prediction error leaves estimates unchanged") {
    const auto next = adaptation_step(est, Eigen::Vector2d::Zero(), {0.3, -0.4}, 2.0, P, kB, 1e6, pb, 0.01);
    CHECK(next.omega == est.omega);
    CHECK(next.theta == est.theta);
    CHECK(next.sigma == est.sigma);
  }
  SUBCASE("estimate at the inflated edge with an outward drive stays put") {
    AdaptiveEstimates edge = est;
    edge.omega = 5.0 + 5.0 * std::sqrt(1.1);
    const auto next = adaptation_step(edge, {0.0, -1e-3}, {0.0, 0.0}, 1.0, P, kB, 1e6, pb, 1e-3);
    CHECK(std::abs(next.omega - edge.omega) < 1e-12);
  }
  SUBCASE("linearized single step") {
    const double dt = 0.01;
    const auto next = adaptation_step(est, {0.0, 1e-6}, {0.0, 0.0}, 1.0, P, kB, 1e6, pb, dt);
    CHECK(est.omega - next.omega == Approx(dt).epsilon(1e-9));
    // |x|_inf = 0 gives theta no drive; sigma sees the bare error drive.
    CHECK(next.theta == est.theta);
    CHECK(est.sigma - next.sigma == Approx(dt).epsilon(1e-9));
  }
}

TEST_CASE("confinement under adversarial drives") {
  const ProjectionBounds pb;
  const Eigen::Matrix2d P = lyapunov_solve(kAm, Eigen::Matrix2d::Identity());
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> big(-1e3, 1e3), dtd(1e-6, 1e-2);
  std::bernoulli_distribution sign_flip(0.05);
  AdaptiveEstimates est;
  double sgn = 1.0;
  long violations = 0;
  for (int i = 0; i < 100000; ++i) {
    if (sign_flip(rng)) sgn = -sgn;
    const Eigen::Vector2d x_tilde(sgn * std::abs(big(rng)), sgn * std::abs(big(rng)));
    est = adaptation_step(est, x_tilde, {big(rng), big(rng)}, big(rng), P, kB, 1e6, pb, dtd(rng));
    const bool ok = est.omega >= 5.0 - 5.0 * std::sqrt(1.1) && est.omega <= 5.0 + 5.0 * std::sqrt(1.1) &&
                    std::abs(est.theta) <= 10.0 * (1.0 + pb.epsilon) && std::abs(est.sigma) <= 100.0 * (1.0 + pb.epsilon) &&
                    within_projection_sets(est, pb);
    if (!ok) ++violations;
  }
  CHECK(violations == 0);
}

TEST_CASE("predictor step") {
  SUBCASE("equilibrium") {
    const auto next = predictor_step(Eigen::Vector2d::Zero(), Eigen::Vector2d::Zero(), 0.0, {}, kAm, kB, 0.01);
    CHECK(next.isZero(0.0));
  }
  SUBCASE("matches rk4 on the same derivative") {
    const AdaptiveEstimates est{1.0, 0.0, 0.0};
    const auto next = predictor_step(Eigen::Vector2d::Zero(), Eigen::Vector2d::Zero(), 1.0, est, kAm, kB, 0.01);
    const Eigen::Vector2d ref = rk4_step(
        [](const Eigen::Vector2d& v, double) -> Eigen::Vector2d { return kAm * v + kB; }, Eigen::Vector2d::Zero().eval(),
        0.0, 0.01);
    CHECK(next(0) == Approx(ref(0)).epsilon(1e-15));
    CHECK(next(1) == Approx(ref(1)).epsilon(1e-15));
  }
  SUBCASE("predictor tracks a matching linear plant") {
    const AdaptiveEstimates est{1.5, 0.5, -0.2};
    Eigen::Vector2d x(0.2, -0.1), x_hat = x;
    const double h = 1e-3;
    for (int i = 0; i < 2000; ++i) {
      const double u = std::sin(0.01 * i);
      auto plant = [&](const Eigen::Vector2d& v, double) -> Eigen::Vector2d {
        return kAm * v + kB * (est.omega * u + est.theta * x.cwiseAbs().maxCoeff() + est.sigma);
      };
      const Eigen::Vector2d x_next = rk4_step(plant, x, i * h, h);
      x_hat = predictor_step(x_hat, x, u, est, kAm, kB, h);
      x = x_next;
      CHECK((x_hat - x).cwiseAbs().maxCoeff() < 1e-12);
    }
  }
}

TEST_CASE("eta hat") {
  CHECK(eta_hat({}, {0.5, -1.0}, 2.0) == 0.0);
  CHECK(eta_hat({1.0, 2.0, 3.0}, {0.5, -1.0}, 2.0) == Approx(7.0));
  CHECK(eta_hat({2.5, 0.0, 0.0}, {4.0, 1.0}, 3.0) == Approx(7.5));
}

TEST_CASE("control law integrator") {
  CHECK(control_step(1.25, 2.0 * 0.5, 0.5, 2.0, 20.0, 0.01).u == 1.25);
  CHECK(control_step(0.0, 1.0, 0.0, 441.552049, 20.0, 0.01).u == Approx(-0.2));
  const double slow = control_step(0.0, 1.0, 0.0, 1.0, 10.0, 0.01).u;
  const double fast = control_step(0.0, 1.0, 0.0, 1.0, 20.0, 0.01).u;
  CHECK(fast == Approx(2.0 * slow));
}
