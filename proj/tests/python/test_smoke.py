import math

import numpy as np
import pytest

import erdsim


def test_dfs_dimensions_and_basis():
    code = erdsim.make_dfs(4, 0)
    assert code.dim == 6
    assert code.space_dim == 16
    pair = erdsim.make_dfs(2, 0)
    assert list(pair.basis) == [1, 2]  # |01>, |10>
    b = pair.basis_matrix()
    assert np.allclose(b.conj().T @ b, np.eye(2))
    with pytest.raises(Exception):
        erdsim.make_dfs(3, 0)  # parity mismatch


def test_encoded_su2():
    ops = erdsim.logical_ops(2, 1, 2)
    x = ops.xbar.system_dense()
    y = ops.ybar.system_dense()
    z = ops.zbar.system_dense()
    assert np.allclose(x @ y - y @ x, 2j * z, atol=1e-12)
    b = erdsim.make_dfs(2, 0).basis_matrix()
    assert np.linalg.norm(ops.xtilde.system_dense() @ b) < 1e-12


def test_pi_pulse_is_zz():
    u = erdsim.ubar_gate(2, 1, 2, -math.pi, 0.0)
    assert np.allclose(u, np.diag([1, -1, -1, 1]), atol=1e-12)
    # The bare two-body exponential only returns -identity.
    full = erdsim.u_ij(math.pi, 0.0, 0.0)
    assert np.allclose(full, -np.eye(4), atol=1e-12)


def test_gaussian_dephase_halves_coherence_at_ln2():
    a = b = 1 / math.sqrt(2)
    rho = erdsim.gaussian_dephase(a, b, math.log(2))
    assert abs(abs(rho[0, 1]) - 0.25) < 1e-12
    quad = erdsim.gaussian_dephase_quadrature(a, b, math.log(2))
    assert np.max(np.abs(rho - quad)) < 1e-8


def test_parity_kick_exactness():
    b1, b2 = erdsim.random_bath_ops(2, bath_dim=2, seed=5)
    h = erdsim.OperatorSum(2, 2)
    h.add(1.0, "ZI", b1)
    h.add(1.0, "IZ", b2)
    collective = erdsim.OperatorSum(2, 2)
    collective.add(0.5, "ZI", b1 + b2)
    collective.add(0.5, "IZ", b1 + b2)
    tau = 0.7
    run = erdsim.run_sequence(erdsim.seq_parity_kick(tau), h)
    target = erdsim.expm_hermitian(collective.dense(), 2 * tau)
    assert erdsim.operator_distance(run, target) < 1e-10


def test_classify_names():
    assert erdsim.classify(erdsim.PauliString("ZZ").dense()) == "Dfs"
    assert erdsim.classify(erdsim.PauliString("XI").dense()) == "Leak"
    ops = erdsim.logical_ops(2, 1, 2)
    assert erdsim.classify(ops.ybar.system_dense()) == "Logi"


def test_leakage_elimination():
    rng = np.random.default_rng(3)
    h = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    h = h + h.conj().T
    sys = erdsim.LevelSystem(np.array([0.0, 1.0, 2.5, 4.1]), h)
    res = erdsim.eliminate_all_leakage(sys)
    assert res.leakage_norm < 1e-12
    assert len(res.steps) <= 4
    u0 = sys.u0(res.steps[0][2])
    assert np.max(np.abs(u0 - np.diag(np.diag(u0)))) == 0.0


def test_residual_scaling_is_quadratic():
    # A generic coupling needs every Pauli direction: sparse picks can be
    # cancelled beyond first order, leaving only flat numerical noise.
    paulis = [a + b for a in "IXYZ" for b in "IXYZ"][1:]
    baths = erdsim.random_bath_ops(len(paulis), bath_dim=2, seed=9)
    h = erdsim.OperatorSum(2, 2)
    for s, b in zip(paulis, baths):
        h.add(1.0 / len(paulis), s, b)
    taus = [1e-3 * (10 ** (k / 4)) for k in range(5)]
    res = [erdsim.first_order_residual(erdsim.seq_leak4(t), h) for t in taus]
    slope = np.polyfit(np.log(taus), np.log(res), 1)[0]
    assert abs(slope - 2.0) < 0.1


def test_dim_cap_is_positive():
    assert erdsim.dim_cap() >= 16
