#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "fuzzy_l1/errors.hpp"

namespace fuzzy_l1 {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using RowVector = Eigen::RowVectorXd;

// Linear SISO realization x' = A x + b u, y = c x.
struct StateSpaceModel {
  Matrix A;
  Vector b;
  RowVector c;

  Eigen::Index order() const { return A.rows(); }
  // Throws DimensionError when A is not square or b / c do not match it.
  void validate() const;
  // -c A^-1 b; requires A invertible.
  double dc_gain() const;
};

// Uniform time grid [t0, tf] with spacing dt. Sample i sits at t0 + i*dt.
struct TimeGrid {
  double t0 = 0.0;
  double tf = 8.0;
  double dt = 0.01;

  void validate() const;
  std::size_t steps() const;
  double time(std::size_t i) const { return t0 + static_cast<double>(i) * dt; }
};

namespace detail {

inline bool all_finite(double v) { return std::isfinite(v); }

template <typename Derived>
bool all_finite(const Eigen::MatrixBase<Derived>& v) {
  return v.allFinite();
}

[[noreturn]] void throw_integration_fault(double t);

}  // namespace detail

/// Classical fourth-order Runge-Kutta step of x' = deriv(x, t).
///
/// `State` may be a double or any Eigen vector type. Throws IntegrationFault
/// naming the stage time when a derivative evaluation is not finite.
template <typename State, typename Deriv>
State rk4_step(Deriv&& deriv, const State& x, double t, double dt) {
  const double half = 0.5 * dt;
  const State k1 = deriv(x, t);
  if (!detail::all_finite(k1)) detail::throw_integration_fault(t);
  const State k2 = deriv(State(x + half * k1), t + half);
  if (!detail::all_finite(k2)) detail::throw_integration_fault(t + half);
  const State k3 = deriv(State(x + half * k2), t + half);
  if (!detail::all_finite(k3)) detail::throw_integration_fault(t + half);
  const State k4 = deriv(State(x + dt * k3), t + dt);
  if (!detail::all_finite(k4)) detail::throw_integration_fault(t + dt);
  return State(x + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4));
}

struct PolePlacement {
  RowVector K;  // state-feedback row, u = -K x
  Matrix Am;    // A - b K
};

/// Ackermann placement of the closed-loop spectrum of (A, b).
/// `poles` must be closed under conjugation and have one entry per state.
PolePlacement place_poles(const Matrix& A, const Vector& b,
                          const std::vector<std::complex<double>>& poles);

/// Solves Am^T P + P Am = -Q for symmetric positive-definite P.
Matrix lyapunov_solve(const Matrix& Am, const Matrix& Q);

/// k_g = -1 / (c Am^-1 b), the reference gain giving unity DC gain.
double feedforward_gain(const Matrix& Am, const Vector& b, const RowVector& c);

/// Controllable canonical realization of num(s)/den(s); coefficients are
/// ordered from the highest power down. The ratio must be strictly proper.
StateSpaceModel realize_siso_tf(const std::vector<double>& num, const std::vector<double>& den);

bool is_hurwitz(const Matrix& A);

Eigen::VectorXcd eigenvalues(const Matrix& A);

// Max-abs entry of Am^T P + P Am + Q.
double lyapunov_residual(const Matrix& Am, const Matrix& P, const Matrix& Q);

}  // namespace fuzzy_l1
