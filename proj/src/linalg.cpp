#include "erd/linalg.hpp"

#include <cstdlib>
#include <stdexcept>
#include <string>

namespace erd {

long dim_cap() {
  static const long cap = [] {
    const char* env = std::getenv("ERD_DIM_CAP");
    if (env == nullptr || *env == '\0') return 1024L;
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (end == nullptr || *end != '\0' || v <= 0) {
      throw std::runtime_error("ERD_DIM_CAP must be a positive integer, got '" +
                               std::string(env) + "'");
    }
    return v;
  }();
  return cap;
}

void check_dim(long dim) {
  if (dim > dim_cap()) {
    throw std::runtime_error("total dimension " + std::to_string(dim) +
                             " exceeds cap " + std::to_string(dim_cap()) +
                             " (set ERD_DIM_CAP to raise)");
  }
}

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

bool is_hermitian(const Matrix& m, double tol) {
  if (m.rows() != m.cols()) return false;
  return (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

bool is_unitary(const Matrix& m, double tol) {
  if (m.rows() != m.cols()) return false;
  Matrix d = m.adjoint() * m - Matrix::Identity(m.rows(), m.cols());
  return d.cwiseAbs().maxCoeff() <= tol;
}

Matrix dagger(const Matrix& m) { return m.adjoint(); }

Matrix commutator(const Matrix& a, const Matrix& b) { return a * b - b * a; }

double spectral_norm(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  // Largest singular value via the Hermitian m^dag m.
  Eigen::SelfAdjointEigenSolver<Matrix> es(m.adjoint() * m, Eigen::EigenvaluesOnly);
  double top = es.eigenvalues().maxCoeff();
  return top > 0.0 ? std::sqrt(top) : 0.0;
}

double operator_distance(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw std::invalid_argument("operator_distance: shape mismatch");
  }
  return spectral_norm(a - b);
}

double phase_free_distance(const Matrix& a, const Matrix& b) {
  cplx tr = (b.adjoint() * a).trace();
  cplx phase = std::abs(tr) > 1e-300 ? tr / std::abs(tr) : cplx(1.0, 0.0);
  return spectral_norm(a - phase * b);
}

Matrix expm_hermitian(const Matrix& h, double t) {
  return HermitianPropagator(h).at(t);
}

HermitianPropagator::HermitianPropagator(const Matrix& h) {
  if (!is_hermitian(h, 1e-9 * std::max(1.0, h.cwiseAbs().maxCoeff()))) {
    throw std::invalid_argument("expm: generator is not Hermitian");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es((h + h.adjoint()) / 2.0);
  evals_ = es.eigenvalues();
  evecs_ = es.eigenvectors();
}

Matrix HermitianPropagator::at(double t) const {
  Vector phases(evals_.size());
  for (Eigen::Index k = 0; k < evals_.size(); ++k) {
    phases(k) = std::exp(cplx(0.0, -evals_(k) * t));
  }
  return evecs_ * phases.asDiagonal() * evecs_.adjoint();
}

Matrix partial_trace_bath(const Matrix& rho, long sys_dim, long bath_dim) {
  if (rho.rows() != sys_dim * bath_dim || rho.cols() != rho.rows()) {
    throw std::invalid_argument("partial_trace_bath: shape mismatch");
  }
  Matrix out = Matrix::Zero(sys_dim, sys_dim);
  for (long s1 = 0; s1 < sys_dim; ++s1)
    for (long s2 = 0; s2 < sys_dim; ++s2)
      for (long b = 0; b < bath_dim; ++b)
        out(s1, s2) += rho(s1 * bath_dim + b, s2 * bath_dim + b);
  return out;
}

Vector basis_state(long dim, long index) {
  if (index < 0 || index >= dim) {
    throw std::out_of_range("basis_state: index out of range");
  }
  Vector v = Vector::Zero(dim);
  v(index) = 1.0;
  return v;
}

Matrix density_from_state(const Vector& psi) {
  double n = psi.norm();
  if (n < 1e-12) throw std::invalid_argument("density_from_state: zero vector");
  Vector u = psi / n;
  return u * u.adjoint();
}

Matrix maximally_mixed(long dim) {
  return Matrix::Identity(dim, dim) / static_cast<double>(dim);
}

double purity(const Matrix& rho) { return (rho * rho).trace().real(); }

double state_fidelity(const Vector& psi, const Matrix& rho) {
  return (psi.adjoint() * rho * psi)(0, 0).real();
}

void validate_density(const Matrix& rho, double tol) {
  if (!is_hermitian(rho, tol)) {
    throw std::invalid_argument("density matrix is not Hermitian");
  }
  if (std::abs(rho.trace().real() - 1.0) > tol) {
    throw std::invalid_argument("density matrix trace is not 1");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(rho, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -tol) {
    throw std::invalid_argument("density matrix has a negative eigenvalue");
  }
}

Matrix restrict_to(const Matrix& m, const Matrix& basis_cols) {
  return basis_cols.adjoint() * m * basis_cols;
}

double subspace_leakage(const Matrix& m, const Matrix& basis_cols) {
  Matrix proj = basis_cols * basis_cols.adjoint();
  Matrix comp = Matrix::Identity(m.rows(), m.cols()) - proj;
  return spectral_norm(comp * m * basis_cols);
}

}  // namespace erd
