#include "fuzzy_l1/sim_core.hpp"

#include <algorithm>
#include <sstream>

namespace fuzzy_l1 {

namespace detail {

void throw_integration_fault(double t) {
  std::ostringstream os;
  os << "non-finite derivative at t = " << t;
  throw IntegrationFault(t, os.str());
}

}  // namespace detail

void StateSpaceModel::validate() const {
  if (A.rows() != A.cols()) throw DimensionError("state matrix A must be square");
  if (b.size() != A.rows()) throw DimensionError("input vector b must have one row per state");
  if (c.size() != A.cols()) throw DimensionError("output row c must have one column per state");
}

double StateSpaceModel::dc_gain() const {
  validate();
  Eigen::FullPivLU<Matrix> lu(A);
  if (!lu.isInvertible()) throw Error("DC gain undefined: A is singular");
  return -(c * lu.solve(b))(0);
}

void TimeGrid::validate() const {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ConfigError("dt", "time step dt must be positive");
  if (!(tf > t0)) throw ConfigError("duration", "final time must exceed the start time");
  const double ratio = (tf - t0) / dt;
  if (std::abs(ratio - std::round(ratio)) > 1e-9 * std::max(1.0, ratio)) {
    throw ConfigError("dt", "duration is not an integral multiple of dt");
  }
}

std::size_t TimeGrid::steps() const {
  return static_cast<std::size_t>(std::llround((tf - t0) / dt));
}

Eigen::VectorXcd eigenvalues(const Matrix& A) {
  if (A.rows() != A.cols()) throw DimensionError("eigenvalues of a non-square matrix");
  Eigen::EigenSolver<Matrix> solver(A, false);
  return solver.eigenvalues();
}

bool is_hurwitz(const Matrix& A) {
  if (A.rows() != A.cols()) throw DimensionError("Hurwitz test of a non-square matrix");
  if (A.rows() == 1) return A(0, 0) < 0.0;
  if (A.rows() == 2) return A.trace() < 0.0 && A.determinant() > 0.0;
  const Eigen::VectorXcd ev = eigenvalues(A);
  return std::all_of(ev.begin(), ev.end(), [](const std::complex<double>& z) { return z.real() < 0.0; });
}

namespace {

// Real coefficients of prod (s - p_i), highest power first.
std::vector<double> characteristic_polynomial(const std::vector<std::complex<double>>& poles) {
  std::vector<std::complex<double>> coeffs{1.0};
  for (const auto& p : poles) {
    std::vector<std::complex<double>> next(coeffs.size() + 1, 0.0);
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
      next[i] += coeffs[i];
      next[i + 1] -= coeffs[i] * p;
    }
    coeffs = std::move(next);
  }
  std::vector<double> out(coeffs.size());
  std::transform(coeffs.begin(), coeffs.end(), out.begin(), [](const auto& z) { return z.real(); });
  return out;
}

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

void require_conjugate_closed(const std::vector<std::complex<double>>& poles) {
  std::vector<bool> used(poles.size(), false);
  for (std::size_t i = 0; i < poles.size(); ++i) {
    if (used[i]) continue;
    const auto& p = poles[i];
    const double scale = std::max(1.0, std::abs(p));
    if (std::abs(p.imag()) <= 1e-12 * scale) {
      used[i] = true;
      continue;
    }
    bool found = false;
    for (std::size_t j = i + 1; j < poles.size() && !found; ++j) {
      if (!used[j] && std::abs(poles[j] - std::conj(p)) <= 1e-9 * scale) {
        used[i] = used[j] = true;
        found = true;
      }
    }
    if (!found) throw Error("requested poles are not closed under conjugation");
  }
}

}  // namespace

PolePlacement place_poles(const Matrix& A, const Vector& b, const std::vector<std::complex<double>>& poles) {
  const Eigen::Index n = A.rows();
  if (A.cols() != n || b.size() != n) throw DimensionError("place_poles: A must be n x n and b n x 1");
  if (static_cast<Eigen::Index>(poles.size()) != n) {
    throw DimensionError("place_poles: need exactly one pole per state");
  }
  require_conjugate_closed(poles);

  Matrix ctrb(n, n);
  ctrb.col(0) = b;
  for (Eigen::Index i = 1; i < n; ++i) ctrb.col(i) = A * ctrb.col(i - 1);
  Eigen::FullPivLU<Matrix> lu(ctrb);
  lu.setThreshold(1e-12);
  if (lu.rank() < n) throw ControllabilityError("place_poles: (A, b) is not controllable");

  // Ackermann: K = e_n^T C^-1 phi(A).
  const std::vector<double> coeffs = characteristic_polynomial(poles);
  Matrix phi = Matrix::Zero(n, n);
  for (double a : coeffs) phi = phi * A + a * Matrix::Identity(n, n);
  const RowVector en_cinv = lu.solve(Matrix(Matrix::Identity(n, n))).row(n - 1);

  PolePlacement out;
  out.K = en_cinv * phi;
  out.Am = A - b * out.K;
  return out;
}

double lyapunov_residual(const Matrix& Am, const Matrix& P, const Matrix& Q) {
  return (Am.transpose() * P + P * Am + Q).cwiseAbs().maxCoeff();
}

Matrix lyapunov_solve(const Matrix& Am, const Matrix& Q) {
  const Eigen::Index n = Am.rows();
  if (Am.cols() != n || Q.rows() != n || Q.cols() != n) throw DimensionError("lyapunov_solve: size mismatch");
  const double qscale = std::max(1.0, Q.cwiseAbs().maxCoeff());
  if ((Q - Q.transpose()).cwiseAbs().maxCoeff() > 1e-12 * qscale) {
    throw Error("lyapunov_solve: Q must be symmetric");
  }
  if (Eigen::LLT<Matrix>(Q).info() != Eigen::Success) throw Error("lyapunov_solve: Q must be positive definite");
  if (!is_hurwitz(Am)) throw StabilityError("lyapunov_solve: A_m is not Hurwitz");

  Matrix P(n, n);
  if (n == 2) {
    // Unknowns (p11, p12, p22) of the symmetric solution.
    const double a = Am(0, 0), b = Am(0, 1), c = Am(1, 0), d = Am(1, 1);
    Eigen::Matrix3d M;
    M << 2.0 * a, 2.0 * c, 0.0,
         b, a + d, c,
         0.0, 2.0 * b, 2.0 * d;
    const Eigen::Vector3d rhs(-Q(0, 0), -0.5 * (Q(0, 1) + Q(1, 0)), -Q(1, 1));
    const Eigen::Vector3d p = M.fullPivLu().solve(rhs);
    P << p(0), p(1), p(1), p(2);
  } else {
    const Matrix I = Matrix::Identity(n, n);
    const Matrix K = kron(I, Am.transpose()) + kron(Am.transpose(), I);
    const Vector q = Eigen::Map<const Vector>(Q.data(), n * n);
    const Vector p = K.fullPivLu().solve(-q);
    P = Eigen::Map<const Matrix>(p.data(), n, n);
    P = 0.5 * (P + P.transpose()).eval();
  }
  return P;
}

double feedforward_gain(const Matrix& Am, const Vector& b, const RowVector& c) {
  if (Am.rows() != Am.cols() || b.size() != Am.rows() || c.size() != Am.cols()) {
    throw DimensionError("feedforward_gain: size mismatch");
  }
  Eigen::FullPivLU<Matrix> lu(Am);
  if (!lu.isInvertible()) throw SingularFeedforwardError("feedforward_gain: A_m is singular");
  const double dc = (c * lu.solve(b))(0);
  if (std::abs(dc) < 1e-12) throw SingularFeedforwardError("feedforward_gain: c A_m^-1 b is zero");
  return -1.0 / dc;
}

StateSpaceModel realize_siso_tf(const std::vector<double>& num, const std::vector<double>& den) {
  if (den.empty() || den.front() == 0.0) throw PropernessError("denominator leading coefficient must be nonzero");
  auto first_nz = std::find_if(num.begin(), num.end(), [](double v) { return v != 0.0; });
  const std::vector<double> numerator(first_nz, num.end());
  const std::size_t n = den.size() - 1;
  if (n == 0) throw PropernessError("denominator must have degree at least one");
  if (!numerator.empty() && numerator.size() - 1 >= n) {
    throw PropernessError("transfer function must be strictly proper");
  }

  const double lead = den.front();
  StateSpaceModel m;
  m.A = Matrix::Zero(n, n);
  m.b = Vector::Zero(n);
  m.c = RowVector::Zero(n);
  for (std::size_t i = 0; i + 1 < n; ++i) m.A(i, i + 1) = 1.0;
  for (std::size_t j = 0; j < n; ++j) m.A(n - 1, j) = -den[n - j] / lead;
  m.b(n - 1) = 1.0;
  // numerator coefficient of s^j, j counted from the constant term
  for (std::size_t j = 0; j < numerator.size(); ++j) {
    m.c(j) = numerator[numerator.size() - 1 - j] / lead;
  }
  return m;
}

}  // namespace fuzzy_l1
