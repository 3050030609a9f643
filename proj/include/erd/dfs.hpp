#pragma once

#include <cstdint>
#include <vector>

#include "erd/operator_sum.hpp"

namespace erd {

// Subspace of K qubits spanned by computational states with a fixed value of
// lambda = (#zeros - #ones); collective phase noise acts on it as a global
// phase only. Basis bitstrings are listed in increasing numeric order
// (qubit 1 = most significant bit).
struct DfsCode {
  int num_qubits = 0;
  int lambda = 0;
  std::vector<std::uint32_t> basis;

  long dim() const { return static_cast<long>(basis.size()); }
  long space_dim() const { return 1L << num_qubits; }
  Vector basis_state(long idx) const;
  Matrix basis_matrix() const;  // space_dim x dim, orthonormal columns
  Matrix projector() const;
};

DfsCode make_dfs(int num_qubits, int lambda);

// Encoded su(2) operators on the physical pair (i, j) of a K-qubit register,
// plus the two quadratures that act only outside the pair's code space:
//   xbar = (XiXj + YiYj)/2   ybar = (YiXj - XiYj)/2   zbar = (Zi - Zj)/2
//   xtilde = (XiXj - YiYj)/2 ytilde = (YiXj + XiYj)/2
struct LogicalOps {
  OperatorSum xbar, ybar, zbar, xtilde, ytilde;
};

LogicalOps logical_ops(int num_qubits, int i, int j);

// Classification of two-qubit system operators by their action relative to
// the pair code {|01>, |10>}:
//   Dfs  - preserves the code and commutes with the encoded su(2) inside it
//   Leak - maps the code out of itself
//   Logi - encoded logical action inside the code
//   Mixed - components in more than one of the above
enum class ErrorClass { Dfs, Leak, Logi, Mixed };

const char* error_class_name(ErrorClass c);

struct ClassWeights {
  double dfs = 0.0;
  double leak = 0.0;
  double logi = 0.0;
};

// Hilbert-Schmidt weights of a 4x4 operator in the three classes (the
// sixteen basis operators split 5 / 8 / 3 and are mutually orthogonal).
ClassWeights class_weights(const Matrix& two_qubit_op);
ErrorClass classify(const Matrix& two_qubit_op, double tol = kDefaultTol);
ErrorClass classify(const PauliString& p, double tol = kDefaultTol);

// Overlap of a system density matrix with the code subspace, tr(P rho).
double dfs_fidelity(const Matrix& rho, const DfsCode& code);

// The sixteen classified basis operators (4x4), HS-orthogonal.
const std::vector<std::pair<Matrix, ErrorClass>>& two_qubit_class_basis();

// Dense per-class split of a 4x4 operator (components sum to the input).
struct ClassComponents {
  Matrix dfs, leak, logi;
};
ClassComponents class_components(const Matrix& two_qubit_op);

// Spectral norms of the per-class components of a 2-qubit system (x) bath
// operator, bath factors included.
struct ClassNorms {
  double dfs = 0.0, leak = 0.0, logi = 0.0;
};
ClassNorms class_norms(const OperatorSum& op);

// Spectral norm of the component of `op` along one 4x4 basis operator
// (bath factors included).
double norm_along(const OperatorSum& op, const Matrix& basis_op);

}  // namespace erd
