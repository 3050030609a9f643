#pragma once

#include <array>

#include "erd/dfs.hpp"
#include "erd/sequence.hpp"

namespace erd {

// sigma^x rotated by phi in the equatorial plane: X cos(phi) + Y sin(phi).
OperatorSum x_phi_op(int num_qubits, int qubit, double phi);

struct PhaseGateSpec {
  double theta = 0.0;
  double phi_i = 0.0;
  double phi_j = 0.0;
};

// exp(i theta X_{phi_i} X_{phi_j}) on a qubit pair: equals
// cos(theta) I + i sin(theta) [cos(dphi) xbar + sin(dphi) ybar
//                              + cos(sphi) xtilde + sin(sphi) ytilde]
// with dphi = phi_i - phi_j and sphi = phi_i + phi_j; block-diagonal with
// respect to the pair code and its complement.
Matrix u_ij(const PhaseGateSpec& spec);
Matrix u_ij_embedded(int num_qubits, int i, int j, const PhaseGateSpec& spec);

// Encoded rotation exp(+i theta (cos(dphi) xbar + sin(dphi) ybar)) on pair
// (i, j), identity on the pair's complement subspace.
Matrix ubar_gate(int num_qubits, int i, int j, double theta, double dphi);

// Three-gate conjugation sandwich producing exp(+i theta zbar) on the code:
// ubar(pi/4, phi+pi/2) ubar(theta, phi) ubar(-pi/4, phi+pi/2).
PulseSequence zbar_rotation(double theta, double phi = 0.0);
Matrix zbar_rotation_matrix(double theta, double phi = 0.0);

// Four-body gate exp(-i pi/4 X_{phi1}..X_{phi4}) on two code pairs
// (1,2),(3,4); restricted to code (x) code it enacts
// exp(-i pi/4 xbar_{dphi12} (x) xbar_{dphi34}).
Matrix u4(const std::array<double, 4>& phis);

// e^{-i a angle} b e^{+i a angle}: the generator obtained by conjugating
// exp(i theta b) with the half-kick of a (angle = pi/2 gives the usual
// parity-kick conjugation).
Matrix conjugate_generator(const Matrix& a, const Matrix& b, double angle);
OperatorSum conjugate_generator(const OperatorSum& a, const OperatorSum& b,
                                double angle);
inline Matrix conjugate_by(const Matrix& a, const Matrix& b) {
  return conjugate_generator(a, b, std::numbers::pi / 2);
}

enum class ExchangeModel { Heisenberg, XY, XXZ };

struct ExchangeCouplings {
  double jx = 0.0, jy = 0.0, jz = 0.0;
};

// Pairwise exchange Hamiltonian sum_ij [jx XX + jy YY + jz ZZ] plus local
// sum_i (eps_i/2) Z_i; the model tag constrains the allowed couplings.
struct ExchangeHamiltonian {
  ExchangeModel model = ExchangeModel::XY;
  int num_qubits = 0;
  std::vector<std::tuple<int, int, ExchangeCouplings>> couplings;  // i < j
  std::vector<double> epsilon;

  static ExchangeHamiltonian make(ExchangeModel model, int num_qubits,
                                  std::vector<std::tuple<int, int, ExchangeCouplings>> couplings,
                                  std::vector<double> epsilon);
  OperatorSum raw() const;
};

// Demonstrates single-pair control in an always-on XXZ chain of two code
// pairs: conjugation by exp(-i pi/2 T1x) flips the T1z terms and fixes the
// rest, so averaging switches them off. Throws unless the model is XXZ with
// jx == jy on the code pairs.
VerificationReport xxz_recoupling_demo(const ExchangeHamiltonian& h);

// Chain of two conjugations turning an XY coupling between pairs into a
// purely diagonal encoded coupling; checks the intermediate and final
// generators and the restriction to code (x) code.
VerificationReport xy_universality_demo();

}  // namespace erd
