#include "erd/noise.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace erd {

const Matrix& BathSet::at(const std::string& name) const {
  for (size_t k = 0; k < names.size(); ++k) {
    if (names[k] == name) return ops[k];
  }
  throw std::out_of_range("BathSet: no operator named '" + name + "'");
}

namespace {

Matrix random_hermitian(long dim, Rng& rng) {
  Matrix m(dim, dim);
  for (long i = 0; i < dim; ++i) {
    m(i, i) = rng.normal();
    for (long j = i + 1; j < dim; ++j) {
      cplx z = rng.complex_normal() / std::sqrt(2.0);
      m(i, j) = z;
      m(j, i) = std::conj(z);
    }
  }
  return m;
}

Matrix random_diagonal(long dim, Rng& rng) {
  Matrix m = Matrix::Zero(dim, dim);
  for (long i = 0; i < dim; ++i) m(i, i) = rng.uniform(-1.0, 1.0);
  return m;
}

void rescale(Matrix& m, double norm_bound) {
  double s = spectral_norm(m);
  if (s > 0.0) {
    m *= norm_bound / s;
  }
}

}  // namespace

BathSet random_bath(const std::vector<std::string>& names, const BathSpec& spec) {
  if (spec.bath_dim < 1) throw std::invalid_argument("random_bath: bath_dim < 1");
  if (spec.norm_bound < 0.0) throw std::invalid_argument("random_bath: negative norm");
  BathSet out;
  out.bath_dim = spec.bath_dim;
  out.names = names;
  Rng rng(spec.seed);
  Matrix shared;
  for (size_t k = 0; k < names.size(); ++k) {
    if (spec.identical && k > 0) {
      out.ops.push_back(shared);
      continue;
    }
    Matrix m = spec.diagonal ? random_diagonal(spec.bath_dim, rng)
                             : random_hermitian(spec.bath_dim, rng);
    rescale(m, spec.norm_bound);
    if (spec.identical) shared = m;
    out.ops.push_back(std::move(m));
  }
  return out;
}

OperatorSum dephasing_coupling(int num_qubits, const BathSet& bath) {
  if (bath.ops.size() != static_cast<size_t>(num_qubits)) {
    throw std::invalid_argument("dephasing_coupling: need one bath op per qubit");
  }
  OperatorSum h(num_qubits, bath.bath_dim);
  for (int q = 1; q <= num_qubits; ++q) {
    h.add(1.0, PauliString::single(num_qubits, q, PauliFactor::Z),
          bath.ops[static_cast<size_t>(q - 1)]);
  }
  return h;
}

Deph2Split deph2_split(const BathSet& bath) {
  if (bath.ops.size() != 2) {
    throw std::invalid_argument("deph2_split: need exactly two bath operators");
  }
  using F = PauliFactor;
  Deph2Split out{OperatorSum(2, bath.bath_dim), OperatorSum(2, bath.bath_dim)};
  Matrix sum = bath.ops[0] + bath.ops[1];
  Matrix diff = bath.ops[0] - bath.ops[1];
  out.collective.add(0.5, PauliString::single(2, 1, F::Z), sum);
  out.collective.add(0.5, PauliString::single(2, 2, F::Z), sum);
  out.differential.add(0.5, PauliString::single(2, 1, F::Z), diff);
  out.differential.add(-0.5, PauliString::single(2, 2, F::Z), diff);
  return out;
}

OperatorSum DephasingBlockSplit::total() const {
  OperatorSum t = pair_collective.at(0);
  for (size_t k = 1; k < pair_collective.size(); ++k) t = t + pair_collective[k];
  for (const OperatorSum& d : pair_differential) t = t + d;
  return t;
}

DephasingBlockSplit dephasing_block_split(int num_qubits, const BathSet& bath) {
  if (num_qubits % 2 != 0) {
    throw std::invalid_argument("dephasing_block_split: need an even qubit count");
  }
  if (bath.ops.size() != static_cast<size_t>(num_qubits)) {
    throw std::invalid_argument("dephasing_block_split: need one bath op per qubit");
  }
  using F = PauliFactor;
  DephasingBlockSplit out;
  for (int p = 0; p < num_qubits / 2; ++p) {
    int i = 2 * p + 1, j = 2 * p + 2;
    Matrix sum = bath.ops[static_cast<size_t>(i - 1)] + bath.ops[static_cast<size_t>(j - 1)];
    Matrix diff = bath.ops[static_cast<size_t>(i - 1)] - bath.ops[static_cast<size_t>(j - 1)];
    OperatorSum col(num_qubits, bath.bath_dim), dif(num_qubits, bath.bath_dim);
    col.add(0.5, PauliString::single(num_qubits, i, F::Z), sum);
    col.add(0.5, PauliString::single(num_qubits, j, F::Z), sum);
    dif.add(0.5, PauliString::single(num_qubits, i, F::Z), diff);
    dif.add(-0.5, PauliString::single(num_qubits, j, F::Z), diff);
    out.pair_collective.push_back(std::move(col));
    out.pair_differential.push_back(std::move(dif));
  }
  if (num_qubits % 4 == 0) {
    for (int b = 0; b < num_qubits / 4; ++b) {
      // Block = pairs 2b and 2b+1; collective half couples the block's
      // summed Z to the summed bath, differential half the difference of
      // the two pair-collective pieces.
      int q0 = 4 * b + 1;
      Matrix sum = Matrix::Zero(bath.bath_dim, bath.bath_dim);
      for (int q = q0; q < q0 + 4; ++q) sum += bath.ops[static_cast<size_t>(q - 1)];
      Matrix pa = bath.ops[static_cast<size_t>(q0 - 1)] + bath.ops[static_cast<size_t>(q0)];
      Matrix pb = bath.ops[static_cast<size_t>(q0 + 1)] + bath.ops[static_cast<size_t>(q0 + 2)];
      OperatorSum col(num_qubits, bath.bath_dim), dif(num_qubits, bath.bath_dim);
      for (int q = q0; q < q0 + 4; ++q) {
        col.add(0.25, PauliString::single(num_qubits, q, F::Z), sum);
      }
      for (int q = q0; q < q0 + 2; ++q) {
        dif.add(0.25, PauliString::single(num_qubits, q, F::Z), pa - pb);
      }
      for (int q = q0 + 2; q < q0 + 4; ++q) {
        dif.add(-0.25, PauliString::single(num_qubits, q, F::Z), pa - pb);
      }
      out.block_collective.push_back(std::move(col));
      out.block_differential.push_back(std::move(dif));
    }
  }
  return out;
}

namespace {

Matrix qubit_density(cplx a, cplx b) {
  double n2 = std::norm(a) + std::norm(b);
  if (std::abs(n2 - 1.0) > 1e-12) {
    throw std::invalid_argument("gaussian_dephase: |a|^2 + |b|^2 must be 1");
  }
  Matrix rho(2, 2);
  rho << std::norm(a), a * std::conj(b), std::conj(a) * b, std::norm(b);
  return rho;
}

}  // namespace

Matrix gaussian_dephase(cplx a, cplx b, double alpha) {
  if (alpha < 0.0) throw std::invalid_argument("gaussian_dephase: alpha < 0");
  Matrix rho = qubit_density(a, b);
  double damp = std::exp(-alpha);
  rho(0, 1) *= damp;
  rho(1, 0) *= damp;
  return rho;
}

Matrix gaussian_dephase_quadrature(cplx a, cplx b, double alpha, int intervals) {
  if (alpha < 0.0) throw std::invalid_argument("gaussian_dephase: alpha < 0");
  Matrix rho = qubit_density(a, b);
  if (alpha == 0.0) return rho;
  if (intervals < 2 || intervals % 2 != 0) {
    throw std::invalid_argument("gaussian_dephase_quadrature: need an even interval count");
  }
  double sigma = std::sqrt(2.0 * alpha);
  double lim = 6.0 * sigma;
  double h = 2.0 * lim / intervals;
  double norm = 1.0 / std::sqrt(4.0 * std::numbers::pi * alpha);
  Matrix acc = Matrix::Zero(2, 2);
  for (int k = 0; k <= intervals; ++k) {
    double phi = -lim + k * h;
    double w = (k == 0 || k == intervals) ? 1.0 : (k % 2 == 1 ? 4.0 : 2.0);
    Matrix rz(2, 2);
    rz << std::exp(cplx(0.0, phi / 2.0)), 0.0, 0.0, std::exp(cplx(0.0, -phi / 2.0));
    double p = norm * std::exp(-phi * phi / (4.0 * alpha));
    acc += (w * p) * (rz * rho * rz.adjoint());
  }
  return acc * (h / 3.0);
}

OperatorSum collective_dephasing(int num_qubits, const Matrix& b_op) {
  OperatorSum h(num_qubits, b_op.rows());
  for (int q = 1; q <= num_qubits; ++q) {
    h.add(1.0, PauliString::single(num_qubits, q, PauliFactor::Z), b_op);
  }
  return h;
}

}  // namespace erd
