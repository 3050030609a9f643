#include "erd/offres.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace erd {

LevelSystem LevelSystem::make(Eigen::VectorXd energies, Matrix h_interaction) {
  long n = energies.size();
  if (n < 3) throw std::invalid_argument("LevelSystem: need at least 3 levels");
  if (h_interaction.rows() != n || h_interaction.cols() != n) {
    throw std::invalid_argument("LevelSystem: interaction shape mismatch");
  }
  if (!is_hermitian(h_interaction, 1e-10)) {
    throw std::invalid_argument("LevelSystem: interaction must be Hermitian");
  }
  return LevelSystem{std::move(energies), std::move(h_interaction)};
}

Matrix LevelSystem::h0() const {
  Matrix m = Matrix::Zero(num_levels(), num_levels());
  for (long k = 0; k < num_levels(); ++k) m(k, k) = energies(k);
  return m;
}

Matrix LevelSystem::u0(double t) const {
  Matrix m = Matrix::Zero(num_levels(), num_levels());
  for (long k = 0; k < num_levels(); ++k) {
    m(k, k) = std::exp(cplx(0.0, -energies(k) * t));
  }
  return m;
}

Matrix offres_conjugate(const LevelSystem& sys, const Matrix& h, double t) {
  if (h.rows() != sys.num_levels() || h.cols() != sys.num_levels()) {
    throw std::invalid_argument("offres_conjugate: shape mismatch");
  }
  Matrix u = sys.u0(t);
  return u * h * u.adjoint();
}

Matrix average_step(const LevelSystem& sys, const Matrix& h, int i, int j) {
  long n = sys.num_levels();
  if (i < 1 || j < 1 || i > n || j > n || i == j) {
    throw std::invalid_argument("average_step: bad level pair");
  }
  double gap = sys.energies(i - 1) - sys.energies(j - 1);
  if (gap == 0.0) {
    throw std::invalid_argument("average_step: degenerate levels, no phase to exploit");
  }
  double tstar = std::numbers::pi / gap;
  return 0.5 * (h + offres_conjugate(sys, h, tstar));
}

double leakage_block_norm(const Matrix& h) {
  if (h.rows() < 3) throw std::invalid_argument("leakage_block_norm: too few levels");
  return spectral_norm(h.block(0, 2, 2, h.cols() - 2));
}

EliminationResult eliminate_all_leakage(const LevelSystem& sys, double threshold) {
  long n = sys.num_levels();
  EliminationResult res;
  res.h_final = sys.h_interaction;
  // Each step zeroes its target entry for good and never raises any other
  // magnitude, so the loop finishes in at most one step per leakage entry.
  long max_steps = 2 * n;
  for (long step = 0; step < max_steps; ++step) {
    int bi = 0, bj = 0;
    double best = threshold;
    for (int i = 1; i <= 2; ++i) {
      for (int j = 3; j <= n; ++j) {
        double mag = std::abs(res.h_final(i - 1, j - 1));
        if (mag > best) {
          best = mag;
          bi = i;
          bj = j;
        }
      }
    }
    if (bi == 0) break;
    double gap = sys.energies(bi - 1) - sys.energies(bj - 1);
    res.h_final = average_step(sys, res.h_final, bi, bj);
    double duration = std::numbers::pi / gap;
    res.steps.push_back(EliminationStep{bi, bj, duration});
    std::ostringstream label;
    label << "U0[" << bi << "," << bj << "]";
    res.schedule.append_pulse(sys.u0(duration), label.str());
  }
  res.leakage_norm = leakage_block_norm(res.h_final);
  return res;
}

}  // namespace erd
