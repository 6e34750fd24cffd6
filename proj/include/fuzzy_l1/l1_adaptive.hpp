#pragma once

#include <Eigen/Dense>

namespace fuzzy_l1 {

// Closed interval described by its midpoint and half-width.
struct IntervalBound {
  double center = 0.0;
  double half_width = 1.0;

  static IntervalBound from_limits(double lower, double upper) {
    return {0.5 * (lower + upper), 0.5 * (upper - lower)};
  }
  static IntervalBound symmetric(double bound) { return {0.0, bound}; }

  // Largest distance from the center reachable under projection with margin epsilon.
  double inflated_radius(double epsilon) const;
};

struct ProjectionBounds {
  double omega_lower = 0.0;
  double omega_upper = 10.0;
  double theta_bound = 10.0;
  double sigma_bound = 100.0;  // Delta
  double epsilon = 0.1;        // smooth-projection margin fraction

  void validate() const;
  IntervalBound omega() const { return IntervalBound::from_limits(omega_lower, omega_upper); }
  IntervalBound theta() const { return IntervalBound::symmetric(theta_bound); }
  IntervalBound sigma() const { return IntervalBound::symmetric(sigma_bound); }
};

struct AdaptiveEstimates {
  double omega = 0.0;
  double theta = 0.0;
  double sigma = 0.0;
};

// True when every estimate lies inside its epsilon-inflated set.
bool within_projection_sets(const AdaptiveEstimates& est, const ProjectionBounds& bounds);

/// Smooth projection operator for a scalar estimate.
///
/// Uses the convex boundary function f = ((theta - c)^2 - r^2) / (eps r^2):
/// the drive passes unchanged in the interior (f <= 0) or when it points
/// inward, and is scaled by (1 - f) otherwise, so the estimate cannot leave
/// the set where f <= 1.
double projection(double estimate, double drive, const IntervalBound& bound, double epsilon);

/// Advances the three projected adaptation laws over dt, holding x_tilde, x
/// and u constant. x_tilde = x_hat - x.
AdaptiveEstimates adaptation_step(const AdaptiveEstimates& est, const Eigen::Vector2d& x_tilde,
                                  const Eigen::Vector2d& x, double u, const Eigen::Matrix2d& P,
                                  const Eigen::Vector2d& b, double gamma, const ProjectionBounds& bounds,
                                  double dt);

// State predictor x_hat' = Am x_hat + b (omega u + theta |x|_inf + sigma), inputs held over dt.
Eigen::Vector2d predictor_step(const Eigen::Vector2d& x_hat, const Eigen::Vector2d& x, double u,
                               const AdaptiveEstimates& est, const Eigen::Matrix2d& Am,
                               const Eigen::Vector2d& b, double dt);

double eta_hat(const AdaptiveEstimates& est, const Eigen::Vector2d& x, double u);

struct ControlOutput {
  double integrator = 0.0;
  double u = 0.0;
};

// u' = -k (eta_hat - k_g r) over dt; D(s) = 1/s so the control signal is the integrator state.
ControlOutput control_step(double integrator, double eta, double r, double k_g, double k_active, double dt);

struct L1State {
  Eigen::Vector2d x_hat = Eigen::Vector2d::Zero();
  double u_int = 0.0;
  AdaptiveEstimates estimates;
  Eigen::Matrix2d P = Eigen::Matrix2d::Identity();
  double k_g = 1.0;
  double gamma = 1.0;
};

}  // namespace fuzzy_l1
