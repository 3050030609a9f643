#pragma once

#include "erd/sequence.hpp"

namespace erd {

// An N-level system with diagonal bare energies; levels 1 and 2 (1-based)
// carry the qubit, everything above is ancillary structure that the
// interaction may leak into.
struct LevelSystem {
  Eigen::VectorXd energies;
  Matrix h_interaction;

  static LevelSystem make(Eigen::VectorXd energies, Matrix h_interaction);
  long num_levels() const { return energies.size(); }
  Matrix h0() const;           // diag(energies)
  Matrix u0(double t) const;   // exp(-i h0 t), strictly diagonal
  Matrix total() const { return h0() + h_interaction; }
};

// Bare-evolution conjugation of h for time t: entry (k, l) acquires the
// phase exp(-i (E_k - E_l) t).
Matrix offres_conjugate(const LevelSystem& sys, const Matrix& h, double t);

// One averaging step aimed at entry (i, j): (h + conj(h, t*))/2 with
// t* = pi / (E_i - E_j). Zeroes every entry whose gap is an odd multiple of
// the target gap, leaves even multiples untouched, and never grows any
// magnitude. Throws if the target gap vanishes.
Matrix average_step(const LevelSystem& sys, const Matrix& h, int i, int j);

// Norm of the block coupling the qubit levels {1,2} to the rest.
double leakage_block_norm(const Matrix& h);

struct EliminationStep {
  int i = 0, j = 0;
  double duration = 0.0;
};

struct EliminationResult {
  Matrix h_final;
  std::vector<EliminationStep> steps;
  PulseSequence schedule;  // the bare-evolution intervals as pulses
  double leakage_norm = 0.0;
};

// Repeats average_step on the largest remaining qubit-leakage entry until
// the leakage block is numerically zero. Entries at or below `threshold`
// are considered already gone.
EliminationResult eliminate_all_leakage(const LevelSystem& sys,
                                        double threshold = 1e-12);

}  // namespace erd
