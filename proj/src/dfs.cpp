#include "erd/dfs.hpp"

#include <array>
#include <bit>
#include <map>
#include <stdexcept>

namespace erd {

namespace {

PauliString two_site(int num_qubits, int i, int j, PauliFactor fi, PauliFactor fj) {
  return PauliString::single(num_qubits, i, fi) * PauliString::single(num_qubits, j, fj);
}

}  // namespace

Vector DfsCode::basis_state(long idx) const {
  if (idx < 0 || idx >= dim()) throw std::out_of_range("DfsCode: basis index");
  return erd::basis_state(space_dim(), basis[static_cast<size_t>(idx)]);
}

Matrix DfsCode::basis_matrix() const {
  Matrix b = Matrix::Zero(space_dim(), dim());
  for (long k = 0; k < dim(); ++k) b(basis[static_cast<size_t>(k)], k) = 1.0;
  return b;
}

Matrix DfsCode::projector() const {
  Matrix b = basis_matrix();
  return b * b.adjoint();
}

DfsCode make_dfs(int num_qubits, int lambda) {
  if (num_qubits < 1) throw std::invalid_argument("make_dfs: need >= 1 qubit");
  if ((num_qubits + lambda) % 2 != 0 || lambda < -num_qubits || lambda > num_qubits) {
    throw std::invalid_argument("make_dfs: no states with that zero/one imbalance");
  }
  check_dim(1L << num_qubits);
  DfsCode code;
  code.num_qubits = num_qubits;
  code.lambda = lambda;
  int ones = (num_qubits - lambda) / 2;
  for (std::uint32_t b = 0; b < (1u << num_qubits); ++b) {
    if (std::popcount(b) == ones) code.basis.push_back(b);
  }
  return code;
}

LogicalOps logical_ops(int num_qubits, int i, int j) {
  if (i == j || i < 1 || j < 1 || i > num_qubits || j > num_qubits) {
    throw std::invalid_argument("logical_ops: bad qubit pair");
  }
  using F = PauliFactor;
  LogicalOps ops{OperatorSum(num_qubits), OperatorSum(num_qubits),
                 OperatorSum(num_qubits), OperatorSum(num_qubits),
                 OperatorSum(num_qubits)};
  ops.xbar.add(0.5, two_site(num_qubits, i, j, F::X, F::X));
  ops.xbar.add(0.5, two_site(num_qubits, i, j, F::Y, F::Y));
  ops.ybar.add(0.5, two_site(num_qubits, i, j, F::Y, F::X));
  ops.ybar.add(-0.5, two_site(num_qubits, i, j, F::X, F::Y));
  ops.zbar.add(0.5, PauliString::single(num_qubits, i, F::Z));
  ops.zbar.add(-0.5, PauliString::single(num_qubits, j, F::Z));
  ops.xtilde.add(0.5, two_site(num_qubits, i, j, F::X, F::X));
  ops.xtilde.add(-0.5, two_site(num_qubits, i, j, F::Y, F::Y));
  ops.ytilde.add(0.5, two_site(num_qubits, i, j, F::Y, F::X));
  ops.ytilde.add(0.5, two_site(num_qubits, i, j, F::X, F::Y));
  return ops;
}

const char* error_class_name(ErrorClass c) {
  switch (c) {
    case ErrorClass::Dfs: return "Dfs";
    case ErrorClass::Leak: return "Leak";
    case ErrorClass::Logi: return "Logi";
    case ErrorClass::Mixed: return "Mixed";
  }
  return "?";
}

const std::vector<std::pair<Matrix, ErrorClass>>& two_qubit_class_basis() {
  static const std::vector<std::pair<Matrix, ErrorClass>> basis = [] {
    std::vector<std::pair<Matrix, ErrorClass>> out;
    auto str = [](const char* s) { return PauliString(s).dense(); };
    LogicalOps ops = logical_ops(2, 1, 2);
    // Operators commuting with the encoded su(2) on the code: the collective
    // half-sum of Z's, the two tilde quadratures, ZZ, and the identity.
    out.emplace_back(0.5 * (str("ZI") + str("IZ")), ErrorClass::Dfs);
    out.emplace_back(ops.xtilde.system_dense(), ErrorClass::Dfs);
    out.emplace_back(ops.ytilde.system_dense(), ErrorClass::Dfs);
    out.emplace_back(str("ZZ"), ErrorClass::Dfs);
    out.emplace_back(str("II"), ErrorClass::Dfs);
    // Operators connecting the code {|01>,|10>} to {|00>,|11>}.
    for (const char* s : {"XI", "IX", "YI", "IY", "XZ", "ZX", "YZ", "ZY"}) {
      out.emplace_back(str(s), ErrorClass::Leak);
    }
    // Encoded logical su(2).
    out.emplace_back(ops.xbar.system_dense(), ErrorClass::Logi);
    out.emplace_back(ops.ybar.system_dense(), ErrorClass::Logi);
    out.emplace_back(ops.zbar.system_dense(), ErrorClass::Logi);
    return out;
  }();
  return basis;
}

ClassWeights class_weights(const Matrix& two_qubit_op) {
  if (two_qubit_op.rows() != 4 || two_qubit_op.cols() != 4) {
    throw std::invalid_argument("class_weights: expected a 4x4 operator");
  }
  ClassWeights w;
  for (const auto& [b, c] : two_qubit_class_basis()) {
    double norm2 = (b.adjoint() * b).trace().real();
    double overlap = std::norm((b.adjoint() * two_qubit_op).trace()) / norm2;
    switch (c) {
      case ErrorClass::Dfs: w.dfs += overlap; break;
      case ErrorClass::Leak: w.leak += overlap; break;
      case ErrorClass::Logi: w.logi += overlap; break;
      case ErrorClass::Mixed: break;
    }
  }
  return w;
}

ErrorClass classify(const Matrix& two_qubit_op, double tol) {
  ClassWeights w = class_weights(two_qubit_op);
  double total = w.dfs + w.leak + w.logi;
  if (total < 1e-28) throw std::invalid_argument("classify: zero operator");
  int present = 0;
  ErrorClass cls = ErrorClass::Mixed;
  if (w.dfs / total > tol) { ++present; cls = ErrorClass::Dfs; }
  if (w.leak / total > tol) { ++present; cls = ErrorClass::Leak; }
  if (w.logi / total > tol) { ++present; cls = ErrorClass::Logi; }
  return present == 1 ? cls : ErrorClass::Mixed;
}

ErrorClass classify(const PauliString& p, double tol) {
  if (p.num_qubits() != 2) {
    throw std::invalid_argument("classify: expected a 2-qubit string");
  }
  return classify(p.dense(), tol);
}

ClassComponents class_components(const Matrix& two_qubit_op) {
  if (two_qubit_op.rows() != 4 || two_qubit_op.cols() != 4) {
    throw std::invalid_argument("class_components: expected a 4x4 operator");
  }
  ClassComponents out{Matrix::Zero(4, 4), Matrix::Zero(4, 4), Matrix::Zero(4, 4)};
  for (const auto& [b, c] : two_qubit_class_basis()) {
    double norm2 = (b.adjoint() * b).trace().real();
    cplx coeff = (b.adjoint() * two_qubit_op).trace() / norm2;
    switch (c) {
      case ErrorClass::Dfs: out.dfs += coeff * b; break;
      case ErrorClass::Leak: out.leak += coeff * b; break;
      case ErrorClass::Logi: out.logi += coeff * b; break;
      case ErrorClass::Mixed: break;
    }
  }
  return out;
}

namespace {

// Dense system (x) bath matrices of the three class components.
std::array<Matrix, 3> class_split_dense(const OperatorSum& op) {
  if (op.num_qubits() != 2) {
    throw std::invalid_argument("class split: 2-qubit system operators only");
  }
  long total = op.total_dim();
  std::array<Matrix, 3> out{Matrix::Zero(total, total), Matrix::Zero(total, total),
                            Matrix::Zero(total, total)};
  // Group terms by bath content first.
  std::map<std::uint64_t, std::pair<Matrix, Matrix>> groups;
  for (const auto& t : op.terms()) {
    auto it = groups.find(t.bath_key);
    if (it == groups.end()) {
      it = groups.emplace(t.bath_key, std::make_pair(Matrix::Zero(4, 4), t.bath)).first;
    }
    it->second.first += t.coeff * t.system.dense();
  }
  for (auto& [key, pair] : groups) {
    ClassComponents c = class_components(pair.first);
    out[0] += kron(c.dfs, pair.second);
    out[1] += kron(c.leak, pair.second);
    out[2] += kron(c.logi, pair.second);
  }
  return out;
}

}  // namespace

ClassNorms class_norms(const OperatorSum& op) {
  auto split = class_split_dense(op);
  return ClassNorms{spectral_norm(split[0]), spectral_norm(split[1]),
                    spectral_norm(split[2])};
}

double norm_along(const OperatorSum& op, const Matrix& basis_op) {
  if (op.num_qubits() != 2) {
    throw std::invalid_argument("norm_along: 2-qubit system operators only");
  }
  double norm2 = (basis_op.adjoint() * basis_op).trace().real();
  long total = op.total_dim();
  Matrix acc = Matrix::Zero(total, total);
  std::map<std::uint64_t, std::pair<Matrix, Matrix>> groups;
  for (const auto& t : op.terms()) {
    auto it = groups.find(t.bath_key);
    if (it == groups.end()) {
      it = groups.emplace(t.bath_key, std::make_pair(Matrix::Zero(4, 4), t.bath)).first;
    }
    it->second.first += t.coeff * t.system.dense();
  }
  for (auto& [key, pair] : groups) {
    cplx coeff = (basis_op.adjoint() * pair.first).trace() / norm2;
    acc += kron(coeff * basis_op, pair.second);
  }
  return spectral_norm(acc);
}

double dfs_fidelity(const Matrix& rho, const DfsCode& code) {
  if (rho.rows() != code.space_dim() || rho.cols() != code.space_dim()) {
    throw std::invalid_argument("dfs_fidelity: shape mismatch");
  }
  return (code.projector() * rho).trace().real();
}

}  // namespace erd
