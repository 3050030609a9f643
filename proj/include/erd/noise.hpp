#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "erd/operator_sum.hpp"
#include "erd/rng.hpp"

namespace erd {

// Specification of a set of named bath coupling operators on one shared
// bath space. Operators are drawn Hermitian with the given spectral norm;
// `diagonal` restricts them to diagonal (mutually commuting) matrices and
// `identical` makes every name share one operator.
struct BathSpec {
  long bath_dim = 2;
  double norm_bound = 1.0;
  std::uint64_t seed = 0;
  bool diagonal = false;
  bool identical = false;
};

struct BathSet {
  long bath_dim = 1;
  std::vector<std::string> names;
  std::vector<Matrix> ops;
  const Matrix& at(const std::string& name) const;
};

BathSet random_bath(const std::vector<std::string>& names, const BathSpec& spec);

// Phase noise sum_j Z_j (x) B_j on num_qubits system qubits.
OperatorSum dephasing_coupling(int num_qubits, const BathSet& bath);

// Split of two-qubit phase noise into collective and differential halves:
//   (Z1 + Z2)/2 (x) (B1 + B2)  and  (Z1 - Z2)/2 (x) (B1 - B2).
struct Deph2Split {
  OperatorSum collective;
  OperatorSum differential;
  OperatorSum total() const { return collective + differential; }
};

Deph2Split deph2_split(const BathSet& bath);

// Pair-level and block-level splits for N qubits grouped into code pairs
// (2j-1, 2j) and, when N % 4 == 0, blocks of two pairs.
struct DephasingBlockSplit {
  std::vector<OperatorSum> pair_collective;
  std::vector<OperatorSum> pair_differential;
  std::vector<OperatorSum> block_collective;   // empty unless N % 4 == 0
  std::vector<OperatorSum> block_differential;
  OperatorSum total() const;
};

DephasingBlockSplit dephasing_block_split(int num_qubits, const BathSet& bath);

// Single qubit under classical Gaussian phase noise of variance 2*alpha:
// the closed form leaves |a|^2, |b|^2 fixed and multiplies the coherence by
// exp(-alpha).
struct DephasingChannel {
  double alpha = 0.0;
};

Matrix gaussian_dephase(cplx a, cplx b, double alpha);
// Independent check: average R_z(phi) rho R_z(phi)^dag over the Gaussian
// phase distribution by composite Simpson quadrature on |phi| <= 6 sqrt(2 alpha).
Matrix gaussian_dephase_quadrature(cplx a, cplx b, double alpha,
                                   int intervals = 4096);

// Collective phase noise lambda-weighted on the whole register:
// (sum_j Z_j) (x) B with one shared bath operator B.
OperatorSum collective_dephasing(int num_qubits, const Matrix& b_op);

}  // namespace erd
