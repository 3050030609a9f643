#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "erd/linalg.hpp"

namespace erd {

enum class PauliFactor : unsigned char { I = 0, X = 1, Y = 2, Z = 3 };

char factor_char(PauliFactor f);
Eigen::Matrix2cd factor_matrix(PauliFactor f);

// Tensor product of single-qubit Pauli factors times a global phase in
// {1, i, -1, -i}. Qubit 1 is the leftmost factor and the most significant
// bit of a basis index; |0> is the +1 eigenvector of Z.
class PauliString {
 public:
  explicit PauliString(int num_qubits);  // identity
  // Factors given as e.g. "XIZ"; phase_quarter q means a phase of i^q.
  explicit PauliString(std::string_view factors, int phase_quarter = 0);
  // Single non-identity factor on `qubit` (1-based).
  static PauliString single(int num_qubits, int qubit, PauliFactor f);

  int num_qubits() const { return static_cast<int>(factors_.size()); }
  PauliFactor factor(int qubit) const;  // 1-based
  int phase_quarter() const { return phase_; }
  cplx phase() const;

  PauliString operator*(const PauliString& rhs) const;
  PauliString adjoint() const;
  bool commutes_with(const PauliString& rhs) const;
  PauliString with_phase(int phase_quarter) const;
  bool is_identity() const;  // identity factors, any phase

  Matrix dense() const;
  std::string to_string() const;       // e.g. "-iXY"
  std::string factors_string() const;  // e.g. "XY", phase dropped

  friend bool operator==(const PauliString&, const PauliString&) = default;

 private:
  std::vector<PauliFactor> factors_;
  int phase_ = 0;  // exponent of i, mod 4
};

PauliString pauli_mul(const PauliString& a, const PauliString& b);

}  // namespace erd
