#include "fuzzy_l1/l1_adaptive.hpp"

#include <algorithm>
#include <cmath>

#include "fuzzy_l1/errors.hpp"
#include "fuzzy_l1/sim_core.hpp"

namespace fuzzy_l1 {

double IntervalBound::inflated_radius(double epsilon) const {
  return half_width * std::sqrt(1.0 + epsilon);
}

void ProjectionBounds::validate() const {
  if (!(omega_lower >= 0.0 && omega_lower < omega_upper)) {
    throw ConfigError("omega_bounds", "input-gain bounds must satisfy 0 <= lower < upper");
  }
  if (!(theta_bound > 0.0)) throw ConfigError("theta_bound", "theta bound must be positive");
  if (!(sigma_bound > 0.0)) throw ConfigError("sigma_bound", "sigma bound must be positive");
  if (!(epsilon > 0.0 && epsilon <= 0.5)) {
    throw ConfigError("projection_epsilon", "projection margin must lie in (0, 0.5]");
  }
}

namespace {

bool inside(double v, const IntervalBound& b, double eps) {
  return std::abs(v - b.center) <= b.inflated_radius(eps);
}

double clamp_to(double v, const IntervalBound& b, double eps) {
  const double r = b.inflated_radius(eps);
  return std::clamp(v, b.center - r, b.center + r);
}

}  // namespace

bool within_projection_sets(const AdaptiveEstimates& est, const ProjectionBounds& bounds) {
  return inside(est.omega, bounds.omega(), bounds.epsilon) && inside(est.theta, bounds.theta(), bounds.epsilon) &&
         inside(est.sigma, bounds.sigma(), bounds.epsilon);
}

double projection(double estimate, double drive, const IntervalBound& bound, double epsilon) {
  const double r2 = bound.half_width * bound.half_width;
  const double offset = estimate - bound.center;
  const double f = (offset * offset - r2) / (epsilon * r2);
  if (f <= 0.0 || offset * drive <= 0.0) return drive;
  return drive * (1.0 - f);
}

AdaptiveEstimates adaptation_step(const AdaptiveEstimates& est, const Eigen::Vector2d& x_tilde,
                                  const Eigen::Vector2d& x, double u, const Eigen::Matrix2d& P,
                                  const Eigen::Vector2d& b, double gamma, const ProjectionBounds& bounds,
                                  double dt) {
  const double error_drive = x_tilde.dot(P * b);
  const double x_norm = x.cwiseAbs().maxCoeff();
  const double eps = bounds.epsilon;

  auto advance = [&](double value, double drive, const IntervalBound& set) {
    // Projection is applied at every RK4 stage; the clamp catches the
    // overshoot a single large stage can still produce at high gamma.
    auto deriv = [&](double v, double) { return gamma * projection(v, drive, set, eps); };
    return clamp_to(rk4_step(deriv, value, 0.0, dt), set, eps);
  };

  AdaptiveEstimates next;
  next.omega = advance(est.omega, -error_drive * u, bounds.omega());
  next.theta = advance(est.theta, -error_drive * x_norm, bounds.theta());
  next.sigma = advance(est.sigma, -error_drive, bounds.sigma());
  return next;
}

Eigen::Vector2d predictor_step(const Eigen::Vector2d& x_hat, const Eigen::Vector2d& x, double u,
                               const AdaptiveEstimates& est, const Eigen::Matrix2d& Am,
                               const Eigen::Vector2d& b, double dt) {
  const Eigen::Vector2d forcing = b * eta_hat(est, x, u);
  auto deriv = [&](const Eigen::Vector2d& xh, double) -> Eigen::Vector2d { return Am * xh + forcing; };
  return rk4_step(deriv, x_hat, 0.0, dt);
}

double eta_hat(const AdaptiveEstimates& est, const Eigen::Vector2d& x, double u) {
  return est.omega * u + est.theta * x.cwiseAbs().maxCoeff() + est.sigma;
}

ControlOutput control_step(double integrator, double eta, double r, double k_g, double k_active, double dt) {
  const double rate = -k_active * (eta - k_g * r);
  auto deriv = [rate](double, double) { return rate; };
  const double next = rk4_step(deriv, integrator, 0.0, dt);
  return {next, next};
}

}  // namespace fuzzy_l1
