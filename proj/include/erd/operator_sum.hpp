#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "erd/linalg.hpp"
#include "erd/pauli.hpp"

namespace erd {

// Sum of terms c * (system Pauli string) (x) (bath operator), the working
// representation for system-bath Hamiltonians. The bath factor is a dense
// matrix on a shared bath space (dimension 1 = no bath). Terms with equal
// Pauli factors and bitwise-equal bath matrices are merged; the string's
// quarter phase is folded into the coefficient so the stored strings are
// phase-free.
class OperatorSum {
 public:
  explicit OperatorSum(int num_qubits, long bath_dim = 1);

  struct Term {
    cplx coeff;
    PauliString system;   // phase-free
    Matrix bath;
    std::uint64_t bath_key;  // content hash used for merging/grouping
  };

  int num_qubits() const { return num_qubits_; }
  long system_dim() const { return 1L << num_qubits_; }
  long bath_dim() const { return bath_dim_; }
  long total_dim() const { return system_dim() * bath_dim_; }
  const std::vector<Term>& terms() const { return terms_; }
  bool empty() const;  // no terms with coefficient above ~1e-15

  void add(cplx coeff, const PauliString& system);  // identity bath factor
  void add(cplx coeff, const PauliString& system, const Matrix& bath);
  void add_bath_only(const Matrix& h_bath);  // identity system factor

  OperatorSum operator+(const OperatorSum& rhs) const;
  OperatorSum operator-(const OperatorSum& rhs) const;
  OperatorSum operator*(cplx scale) const;
  // Term-wise product (Pauli algebra on the system, matrix product on the bath).
  OperatorSum operator*(const OperatorSum& rhs) const;

  // V^dag (this) V with a system-side unitary V; each bath group's system
  // part is conjugated densely and re-expanded over Pauli strings.
  OperatorSum conjugated_by(const Matrix& v) const;

  // Same operator content on a larger bath space (requires bath_dim() == 1).
  OperatorSum lifted_to_bath(long bath_dim) const;

  Matrix dense() const;
  Matrix system_dense() const;  // requires bath_dim() == 1
  bool is_hermitian(double tol = kDefaultTol) const;
  // Max coefficient magnitude (with bath factors' spectral norms weighted in).
  double coefficient_norm() const;

  void drop_small_terms(double tol = 1e-14);

 private:
  int num_qubits_;
  long bath_dim_;
  std::vector<Term> terms_;
  std::map<std::pair<std::string, std::uint64_t>, size_t> index_;
};

// Expansion of a 2^n x 2^n matrix over Pauli strings; coefficients below
// tol are dropped.
std::vector<std::pair<PauliString, cplx>> pauli_decompose(const Matrix& m,
                                                          int num_qubits,
                                                          double tol = 1e-13);

std::uint64_t matrix_content_key(const Matrix& m);

}  // namespace erd
