#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace erd {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

inline constexpr double kDefaultTol = 1e-10;
inline constexpr cplx kI{0.0, 1.0};

// Largest total Hilbert-space dimension we are willing to materialize.
// Defaults to 2^10; override with the ERD_DIM_CAP environment variable.
long dim_cap();
void check_dim(long dim);

Matrix kron(const Matrix& a, const Matrix& b);

bool is_hermitian(const Matrix& m, double tol = kDefaultTol);
bool is_unitary(const Matrix& m, double tol = kDefaultTol);
Matrix dagger(const Matrix& m);
Matrix commutator(const Matrix& a, const Matrix& b);

double spectral_norm(const Matrix& m);
// Spectral norm of a - b; the distance used by every closeness check here.
double operator_distance(const Matrix& a, const Matrix& b);
// min over global phases e^{ic} of ||a - e^{ic} b||; for comparing unitaries
// that may differ by an irrelevant overall phase.
double phase_free_distance(const Matrix& a, const Matrix& b);

// exp(-i h t) for Hermitian h, via eigendecomposition.
Matrix expm_hermitian(const Matrix& h, double t = 1.0);

// Eigendecomposition of a Hermitian generator, reusable across many times t.
class HermitianPropagator {
 public:
  explicit HermitianPropagator(const Matrix& h);
  Matrix at(double t) const;                  // exp(-i h t)
  const Eigen::VectorXd& eigenvalues() const { return evals_; }

 private:
  Eigen::VectorXd evals_;
  Matrix evecs_;
};

// Trace out the second (bath) factor of a state on H_sys (x) H_bath.
Matrix partial_trace_bath(const Matrix& rho, long sys_dim, long bath_dim);

Vector basis_state(long dim, long index);
Matrix density_from_state(const Vector& psi);
Matrix maximally_mixed(long dim);
double purity(const Matrix& rho);
double state_fidelity(const Vector& psi, const Matrix& rho);  // <psi|rho|psi>
void validate_density(const Matrix& rho, double tol = 1e-9);

// B has orthonormal columns spanning a subspace; returns B^dag M B.
Matrix restrict_to(const Matrix& m, const Matrix& basis_cols);
// Norm of the block of M mapping the subspace into its complement.
double subspace_leakage(const Matrix& m, const Matrix& basis_cols);

}  // namespace erd
