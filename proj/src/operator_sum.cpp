#include "erd/operator_sum.hpp"

#include <cstring>
#include <stdexcept>

namespace erd {

namespace {

std::uint64_t fnv1a(const unsigned char* data, size_t n, std::uint64_t h) {
  for (size_t i = 0; i < n; ++i) {
    h ^= data[i];
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace

std::uint64_t matrix_content_key(const Matrix& m) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  std::uint64_t dims[2] = {static_cast<std::uint64_t>(m.rows()),
                           static_cast<std::uint64_t>(m.cols())};
  h = fnv1a(reinterpret_cast<const unsigned char*>(dims), sizeof(dims), h);
  h = fnv1a(reinterpret_cast<const unsigned char*>(m.data()),
            sizeof(cplx) * static_cast<size_t>(m.size()), h);
  return h;
}

OperatorSum::OperatorSum(int num_qubits, long bath_dim)
    : num_qubits_(num_qubits), bath_dim_(bath_dim) {
  if (num_qubits <= 0) throw std::invalid_argument("OperatorSum: need >= 1 qubit");
  if (bath_dim < 1) throw std::invalid_argument("OperatorSum: bath_dim < 1");
  check_dim(total_dim());
}

bool OperatorSum::empty() const {
  for (const Term& t : terms_)
    if (std::abs(t.coeff) > 1e-15) return false;
  return true;
}

void OperatorSum::add(cplx coeff, const PauliString& system) {
  add(coeff, system, Matrix::Identity(bath_dim_, bath_dim_));
}

void OperatorSum::add(cplx coeff, const PauliString& system, const Matrix& bath) {
  if (system.num_qubits() != num_qubits_) {
    throw std::invalid_argument("OperatorSum::add: qubit count mismatch");
  }
  if (bath.rows() != bath_dim_ || bath.cols() != bath_dim_) {
    throw std::invalid_argument("OperatorSum::add: bath dimension mismatch");
  }
  cplx c = coeff * system.phase();
  PauliString bare = system.with_phase(0);
  std::uint64_t key = matrix_content_key(bath);
  auto map_key = std::make_pair(bare.factors_string(), key);
  auto it = index_.find(map_key);
  if (it != index_.end()) {
    terms_[it->second].coeff += c;
    return;
  }
  index_.emplace(map_key, terms_.size());
  terms_.push_back(Term{c, bare, bath, key});
}

void OperatorSum::add_bath_only(const Matrix& h_bath) {
  add(1.0, PauliString(num_qubits_), h_bath);
}

OperatorSum OperatorSum::operator+(const OperatorSum& rhs) const {
  if (num_qubits_ != rhs.num_qubits_ || bath_dim_ != rhs.bath_dim_) {
    throw std::invalid_argument("OperatorSum +: shape mismatch");
  }
  OperatorSum out = *this;
  for (const Term& t : rhs.terms_) out.add(t.coeff, t.system, t.bath);
  return out;
}

OperatorSum OperatorSum::operator-(const OperatorSum& rhs) const {
  return *this + rhs * cplx(-1.0, 0.0);
}

OperatorSum OperatorSum::operator*(cplx scale) const {
  OperatorSum out(num_qubits_, bath_dim_);
  for (const Term& t : terms_) out.add(scale * t.coeff, t.system, t.bath);
  return out;
}

OperatorSum OperatorSum::operator*(const OperatorSum& rhs) const {
  if (num_qubits_ != rhs.num_qubits_ || bath_dim_ != rhs.bath_dim_) {
    throw std::invalid_argument("OperatorSum *: shape mismatch");
  }
  OperatorSum out(num_qubits_, bath_dim_);
  for (const Term& a : terms_)
    for (const Term& b : rhs.terms_)
      out.add(a.coeff * b.coeff, a.system * b.system, a.bath * b.bath);
  return out;
}

OperatorSum OperatorSum::conjugated_by(const Matrix& v) const {
  if (v.rows() != system_dim() || v.cols() != system_dim()) {
    throw std::invalid_argument("conjugated_by: unitary must act on the system");
  }
  // Group terms by bath content, conjugate each group's dense system part.
  std::map<std::uint64_t, std::pair<Matrix, Matrix>> groups;  // key -> (sysacc, bath)
  for (const Term& t : terms_) {
    auto it = groups.find(t.bath_key);
    if (it == groups.end()) {
      it = groups.emplace(t.bath_key,
                          std::make_pair(Matrix::Zero(system_dim(), system_dim()),
                                         t.bath)).first;
    }
    it->second.first += t.coeff * t.system.dense();
  }
  OperatorSum out(num_qubits_, bath_dim_);
  for (auto& [key, pair] : groups) {
    Matrix conj = v.adjoint() * pair.first * v;
    for (auto& [p, c] : pauli_decompose(conj, num_qubits_)) {
      out.add(c, p, pair.second);
    }
  }
  return out;
}

OperatorSum OperatorSum::lifted_to_bath(long bath_dim) const {
  if (bath_dim_ != 1) {
    throw std::invalid_argument("lifted_to_bath: source already has a bath");
  }
  OperatorSum out(num_qubits_, bath_dim);
  Matrix id = Matrix::Identity(bath_dim, bath_dim);
  for (const Term& t : terms_) out.add(t.coeff * t.bath(0, 0), t.system, id);
  return out;
}

Matrix OperatorSum::dense() const {
  check_dim(total_dim());
  Matrix out = Matrix::Zero(total_dim(), total_dim());
  for (const Term& t : terms_) {
    out += t.coeff * kron(t.system.dense(), t.bath);
  }
  return out;
}

Matrix OperatorSum::system_dense() const {
  if (bath_dim_ != 1) {
    throw std::invalid_argument("system_dense: operator has a bath factor");
  }
  return dense();
}

bool OperatorSum::is_hermitian(double tol) const {
  return erd::is_hermitian(dense(), tol);
}

double OperatorSum::coefficient_norm() const {
  double m = 0.0;
  for (const Term& t : terms_) {
    double b = bath_dim_ == 1 ? std::abs(t.bath(0, 0)) : spectral_norm(t.bath);
    m = std::max(m, std::abs(t.coeff) * b);
  }
  return m;
}

void OperatorSum::drop_small_terms(double tol) {
  std::vector<Term> kept;
  kept.reserve(terms_.size());
  for (const Term& t : terms_) {
    if (std::abs(t.coeff) > tol) kept.push_back(t);
  }
  terms_ = std::move(kept);
  index_.clear();
  for (size_t i = 0; i < terms_.size(); ++i) {
    index_.emplace(std::make_pair(terms_[i].system.factors_string(),
                                  terms_[i].bath_key), i);
  }
}

std::vector<std::pair<PauliString, cplx>> pauli_decompose(const Matrix& m,
                                                          int num_qubits,
                                                          double tol) {
  long dim = 1L << num_qubits;
  if (m.rows() != dim || m.cols() != dim) {
    throw std::invalid_argument("pauli_decompose: shape mismatch");
  }
  std::vector<std::pair<PauliString, cplx>> out;
  std::string factors(static_cast<size_t>(num_qubits), 'I');
  const char alphabet[4] = {'I', 'X', 'Y', 'Z'};
  long strings = 1;
  for (int k = 0; k < num_qubits; ++k) strings *= 4;
  for (long code = 0; code < strings; ++code) {
    long c = code;
    for (int q = num_qubits - 1; q >= 0; --q) {
      factors[static_cast<size_t>(q)] = alphabet[c & 3];
      c >>= 2;
    }
    PauliString p(factors);
    cplx coeff = (p.dense().adjoint() * m).trace() / static_cast<double>(dim);
    if (std::abs(coeff) > tol) out.emplace_back(p, coeff);
  }
  return out;
}

}  // namespace erd
