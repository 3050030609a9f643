#include "erd/pauli.hpp"

#include <stdexcept>

namespace erd {

namespace {

// Single-factor product: sigma_a sigma_b = i^phase sigma_c.
struct FactorProduct {
  PauliFactor result;
  int phase_quarter;
};

FactorProduct mul_factors(PauliFactor a, PauliFactor b) {
  if (a == PauliFactor::I) return {b, 0};
  if (b == PauliFactor::I) return {a, 0};
  if (a == b) return {PauliFactor::I, 0};
  int ia = static_cast<int>(a), ib = static_cast<int>(b);
  // X=1, Y=2, Z=3: cyclic (X->Y->Z->X) picks up +i, anticyclic -i.
  int ic = 6 - ia - ib;  // the remaining index
  bool cyclic = (ib - ia + 3) % 3 == 1;
  return {static_cast<PauliFactor>(ic), cyclic ? 1 : 3};
}

}  // namespace

char factor_char(PauliFactor f) {
  switch (f) {
    case PauliFactor::I: return 'I';
    case PauliFactor::X: return 'X';
    case PauliFactor::Y: return 'Y';
    case PauliFactor::Z: return 'Z';
  }
  return '?';
}

Eigen::Matrix2cd factor_matrix(PauliFactor f) {
  Eigen::Matrix2cd m;
  switch (f) {
    case PauliFactor::I: m << 1, 0, 0, 1; break;
    case PauliFactor::X: m << 0, 1, 1, 0; break;
    case PauliFactor::Y: m << 0, -kI, kI, 0; break;
    case PauliFactor::Z: m << 1, 0, 0, -1; break;
  }
  return m;
}

PauliString::PauliString(int num_qubits)
    : factors_(static_cast<size_t>(num_qubits), PauliFactor::I) {
  if (num_qubits <= 0) throw std::invalid_argument("PauliString: need >= 1 qubit");
}

PauliString::PauliString(std::string_view factors, int phase_quarter)
    : phase_(((phase_quarter % 4) + 4) % 4) {
  if (factors.empty()) throw std::invalid_argument("PauliString: empty factors");
  factors_.reserve(factors.size());
  for (char c : factors) {
    switch (c) {
      case 'I': factors_.push_back(PauliFactor::I); break;
      case 'X': factors_.push_back(PauliFactor::X); break;
      case 'Y': factors_.push_back(PauliFactor::Y); break;
      case 'Z': factors_.push_back(PauliFactor::Z); break;
      default:
        throw std::invalid_argument(std::string("PauliString: bad factor '") + c + "'");
    }
  }
}

PauliString PauliString::single(int num_qubits, int qubit, PauliFactor f) {
  PauliString p(num_qubits);
  if (qubit < 1 || qubit > num_qubits) {
    throw std::out_of_range("PauliString::single: qubit out of range");
  }
  p.factors_[static_cast<size_t>(qubit - 1)] = f;
  return p;
}

PauliFactor PauliString::factor(int qubit) const {
  if (qubit < 1 || qubit > num_qubits()) {
    throw std::out_of_range("PauliString::factor: qubit out of range");
  }
  return factors_[static_cast<size_t>(qubit - 1)];
}

cplx PauliString::phase() const {
  static const cplx table[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  return table[phase_];
}

PauliString PauliString::operator*(const PauliString& rhs) const {
  if (num_qubits() != rhs.num_qubits()) {
    throw std::invalid_argument("PauliString product: qubit count mismatch");
  }
  PauliString out(num_qubits());
  int ph = phase_ + rhs.phase_;
  for (size_t k = 0; k < factors_.size(); ++k) {
    auto [f, q] = mul_factors(factors_[k], rhs.factors_[k]);
    out.factors_[k] = f;
    ph += q;
  }
  out.phase_ = ph % 4;
  return out;
}

PauliString PauliString::adjoint() const {
  PauliString out = *this;
  out.phase_ = (4 - phase_) % 4;  // factors are Hermitian; conjugate the phase
  return out;
}

bool PauliString::commutes_with(const PauliString& rhs) const {
  if (num_qubits() != rhs.num_qubits()) {
    throw std::invalid_argument("commutes_with: qubit count mismatch");
  }
  int anti = 0;
  for (size_t k = 0; k < factors_.size(); ++k) {
    PauliFactor a = factors_[k], b = rhs.factors_[k];
    if (a != PauliFactor::I && b != PauliFactor::I && a != b) ++anti;
  }
  return anti % 2 == 0;
}

PauliString PauliString::with_phase(int phase_quarter) const {
  PauliString out = *this;
  out.phase_ = ((phase_quarter % 4) + 4) % 4;
  return out;
}

bool PauliString::is_identity() const {
  for (PauliFactor f : factors_)
    if (f != PauliFactor::I) return false;
  return true;
}

Matrix PauliString::dense() const {
  check_dim(1L << num_qubits());
  Matrix m = phase() * Matrix::Identity(1, 1);
  for (PauliFactor f : factors_) m = kron(m, factor_matrix(f));
  return m;
}

std::string PauliString::to_string() const {
  static const char* prefix[4] = {"+", "+i", "-", "-i"};
  return prefix[phase_] + factors_string();
}

std::string PauliString::factors_string() const {
  std::string s;
  s.reserve(factors_.size());
  for (PauliFactor f : factors_) s.push_back(factor_char(f));
  return s;
}

PauliString pauli_mul(const PauliString& a, const PauliString& b) { return a * b; }

}  // namespace erd
