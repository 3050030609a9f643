#include <doctest.h>

#include "erd/dfs.hpp"
#include "erd/noise.hpp"
#include "erd/rng.hpp"

using namespace erd;

namespace {

long binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  long r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - i + 1) / i;
  return r;
}

}  // namespace

TEST_CASE("subspace dimensions match the binomial count") {
  for (int k = 1; k <= 6; ++k) {
    for (int lambda = -k; lambda <= k; ++lambda) {
      if ((k + lambda) % 2 != 0) {
        CHECK_THROWS_AS(make_dfs(k, lambda), std::invalid_argument);
        continue;
      }
      DfsCode code = make_dfs(k, lambda);
      CHECK(code.dim() == binomial(k, (k + lambda) / 2));
      // Every basis string has the advertised imbalance.
      for (auto b : code.basis) {
        int zeros = 0;
        for (int q = 0; q < k; ++q) zeros += ((b >> q) & 1) == 0 ? 1 : 0;
        CHECK(2 * zeros - k == lambda);
      }
    }
  }
  CHECK_THROWS_AS(make_dfs(2, 4), std::invalid_argument);
}

TEST_CASE("pair code basis order is |01> then |10>") {
  DfsCode code = make_dfs(2, 0);
  REQUIRE(code.dim() == 2);
  CHECK(code.basis[0] == 1);  // |01>
  CHECK(code.basis[1] == 2);  // |10>
  Matrix b = code.basis_matrix();
  CHECK(b(1, 0) == cplx(1, 0));
  CHECK(b(2, 1) == cplx(1, 0));
}

TEST_CASE("collective phase noise acts as a scalar on each code") {
  // sum_j Z_j restricted to the code is lambda times the identity, so the
  // code projector commutes with any collective coupling.
  for (auto [k, lambda] : std::vector<std::pair<int, int>>{{2, 0}, {3, 1}, {3, -1}, {4, 0}}) {
    DfsCode code = make_dfs(k, lambda);
    OperatorSum zsum(k);
    for (int q = 1; q <= k; ++q) {
      zsum.add(1.0, PauliString::single(k, q, PauliFactor::Z));
    }
    Matrix z = zsum.system_dense();
    Matrix p = code.projector();
    CHECK(operator_distance(z * p, static_cast<double>(lambda) * p) < 1e-13);
  }
}

TEST_CASE("encoded operators close the expected algebra") {
  LogicalOps ops = logical_ops(2, 1, 2);
  Matrix x = ops.xbar.system_dense();
  Matrix y = ops.ybar.system_dense();
  Matrix z = ops.zbar.system_dense();
  CHECK(operator_distance(commutator(x, y), 2.0 * kI * z) < 1e-14);
  CHECK(operator_distance(commutator(y, z), 2.0 * kI * x) < 1e-14);
  CHECK(operator_distance(commutator(z, x), 2.0 * kI * y) < 1e-14);
  // On the code the encoded ops act like single-qubit Paulis.
  Matrix b = make_dfs(2, 0).basis_matrix();
  Matrix sx(2, 2), sz(2, 2);
  sx << 0, 1, 1, 0;
  sz << 1, 0, 0, -1;
  CHECK(operator_distance(restrict_to(x, b), sx) < 1e-14);
  CHECK(operator_distance(restrict_to(z, b), sz) < 1e-14);
}

TEST_CASE("tilde quadratures annihilate the code") {
  LogicalOps ops = logical_ops(2, 1, 2);
  Matrix b = make_dfs(2, 0).basis_matrix();
  CHECK(spectral_norm(ops.xtilde.system_dense() * b) < 1e-14);
  CHECK(spectral_norm(ops.ytilde.system_dense() * b) < 1e-14);
  // ...and the encoded ops annihilate the complement.
  Matrix bc(4, 2);
  bc.setZero();
  bc(0, 0) = 1;
  bc(3, 1) = 1;
  CHECK(spectral_norm(ops.xbar.system_dense() * bc) < 1e-14);
  CHECK(spectral_norm(ops.ybar.system_dense() * bc) < 1e-14);
  CHECK(spectral_norm(ops.zbar.system_dense() * bc) < 1e-14);
}

TEST_CASE("classification of the sixteen strings") {
  auto cls = [](const char* s) { return classify(PauliString(s)); };
  CHECK(cls("II") == ErrorClass::Dfs);
  CHECK(cls("ZZ") == ErrorClass::Dfs);
  for (const char* s : {"XI", "IX", "YI", "IY", "XZ", "ZX", "YZ", "ZY"}) {
    CHECK(cls(s) == ErrorClass::Leak);
  }
  // ZI = (Z1+Z2)/2 + zbar: code-preserving plus logical.
  CHECK(cls("ZI") == ErrorClass::Mixed);
  CHECK(cls("IZ") == ErrorClass::Mixed);
  // XX = xbar + xtilde.
  CHECK(cls("XX") == ErrorClass::Mixed);
  CHECK(cls("YY") == ErrorClass::Mixed);
  CHECK(cls("XY") == ErrorClass::Mixed);
  CHECK(cls("YX") == ErrorClass::Mixed);
  LogicalOps ops = logical_ops(2, 1, 2);
  CHECK(classify(ops.xbar.system_dense()) == ErrorClass::Logi);
  CHECK(classify(ops.ybar.system_dense()) == ErrorClass::Logi);
  CHECK(classify(ops.zbar.system_dense()) == ErrorClass::Logi);
  CHECK(classify(ops.xtilde.system_dense()) == ErrorClass::Dfs);
  CHECK_THROWS_AS(classify(Matrix::Zero(4, 4)), std::invalid_argument);
}

TEST_CASE("class basis is orthogonal and complete") {
  const auto& basis = two_qubit_class_basis();
  REQUIRE(basis.size() == 16);
  for (size_t i = 0; i < basis.size(); ++i) {
    for (size_t j = i + 1; j < basis.size(); ++j) {
      cplx ov = (basis[i].first.adjoint() * basis[j].first).trace();
      CHECK(std::abs(ov) < 1e-13);
    }
  }
  // Parseval: class weights add up to the squared HS norm.
  Rng rng(9);
  Matrix m(4, 4);
  for (long i = 0; i < 4; ++i)
    for (long j = 0; j < 4; ++j) m(i, j) = rng.complex_normal();
  ClassWeights w = class_weights(m);
  double hs2 = (m.adjoint() * m).trace().real();
  CHECK(w.dfs + w.leak + w.logi == doctest::Approx(hs2).epsilon(1e-10));
  // Splitting a random operator reproduces it.
  ClassComponents comp = class_components(m);
  CHECK(operator_distance(comp.dfs + comp.leak + comp.logi, m) < 1e-12);
}

TEST_CASE("class norms on operators with bath factors") {
  Matrix b(2, 2);
  b << 1, 0, 0, -1;
  OperatorSum op(2, 2);
  op.add(1.0, PauliString("XI"), b);  // pure leakage
  ClassNorms n = class_norms(op);
  CHECK(n.leak == doctest::Approx(1.0));
  CHECK(n.dfs == doctest::Approx(0.0));
  CHECK(n.logi == doctest::Approx(0.0));
  LogicalOps ops = logical_ops(2, 1, 2);
  CHECK(norm_along(op, ops.xbar.system_dense()) < 1e-14);
}

TEST_CASE("dfs_fidelity tracks the code overlap") {
  DfsCode code = make_dfs(2, 0);
  Vector in_code = code.basis_state(0);
  Vector out_code = basis_state(4, 0);
  CHECK(dfs_fidelity(density_from_state(in_code), code) == doctest::Approx(1.0));
  CHECK(dfs_fidelity(density_from_state(out_code), code) == doctest::Approx(0.0));
  Vector mix = (in_code + out_code) / std::sqrt(2.0);
  CHECK(dfs_fidelity(density_from_state(mix), code) == doctest::Approx(0.5));
}
