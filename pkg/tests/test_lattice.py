import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nessxy import lattice
from nessxy.lattice import LatticeConfig


def test_build_h_small():
    np.testing.assert_array_equal(lattice.build_h(1), [[0, 0.5, 0], [0.5, 0, 0.5], [0, 0.5, 0]])


def test_build_h_symmetric_interior_rows():
    h = lattice.build_h(7)
    np.testing.assert_array_equal(h, h.T)
    np.testing.assert_array_equal(h.sum(axis=1)[1:-1], 1.0)


def test_build_h_spectrum_in_band():
    w = np.linalg.eigvalsh(lattice.build_h(200))
    assert w.min() >= -1 and w.max() <= 1


def test_build_h_rejects_zero():
    with pytest.raises(ValueError):
        lattice.build_h(0)


def test_decoupling_entries():
    v = lattice.build_v_decoupling(1, 3)
    rows, cols = np.nonzero(v)
    pairs = {(r - 3, c - 3) for r, c in zip(rows, cols)}
    assert pairs == {(-2, -1), (-1, -2), (1, 2), (2, 1)}
    assert np.all(v[rows, cols] == 0.5)
    with pytest.raises(ValueError):
        lattice.build_v_decoupling(2, 3)


def test_decoupled_blocks():
    n, L = 3, 12
    hd = lattice.build_h(L) - lattice.build_v_decoupling(n, L)
    assert hd[-n + L, -(n + 1) + L] == 0
    pl, ps, pr = lattice.reservoir_projectors(n, L)
    for p in (pl, ps, pr):
        P = np.diag(p.astype(float))
        np.testing.assert_array_equal(P @ hd, hd @ P)
    whole = np.sort(np.linalg.eigvalsh(hd))
    parts = np.sort(np.concatenate([np.linalg.eigvalsh(hd[np.ix_(p, p)]) for p in (pl, ps, pr)]))
    np.testing.assert_allclose(whole, parts, atol=1e-13)


def test_anisotropy_matrix():
    L = 5
    v = lattice.build_v_anisotropy(0, L)
    assert v[L, L + 1] == -0.5j and v[L + 1, L] == 0.5j
    np.testing.assert_array_equal(v, v.conj().T)
    assert np.linalg.matrix_rank(v) == 2
    assert np.trace(v @ v).real == pytest.approx(0.5)
    support = np.flatnonzero(np.any(v != 0, axis=0)) - L
    assert set(support) == {0, 1}
    with pytest.raises(ValueError):
        lattice.build_v_anisotropy(5, 5)


def test_lift_blocks():
    m = np.arange(4.0).reshape(2, 2)
    z = np.zeros((2, 2))
    np.testing.assert_array_equal(lattice.lift(m, 3), np.block([[m, z], [z, -m]]))
    np.testing.assert_array_equal(lattice.lift(m, 0), np.block([[m, z], [z, m]]))
    np.testing.assert_array_equal(lattice.lift(m, 2), np.block([[z, -1j * m], [1j * m, z]]))


@pytest.mark.parametrize("gamma", [0.0, 0.7, -2.0, 3.5])
def test_hamiltonians(gamma):
    L = 10
    H = lattice.build_H(L)
    V = lattice.lift(lattice.build_v_anisotropy(1, L), 2)
    Hg = lattice.build_H_gamma(gamma, 1, L)
    np.testing.assert_array_equal(Hg, H + gamma * V)
    for A in (H, V, Hg, lattice.build_H_decoupled(2, L)):
        assert np.max(np.abs(A - A.conj().T)) == 0
        assert np.max(np.abs(lattice.gamma_conjugate(A) + A)) < 1e-14
        assert lattice.is_hamiltonian(A)


def test_gamma_is_involution():
    rng = np.random.default_rng(1)
    F = rng.standard_normal(10) + 1j * rng.standard_normal(10)
    np.testing.assert_array_equal(lattice.apply_gamma(lattice.apply_gamma(F)), F)
    A = rng.standard_normal((10, 10))
    np.testing.assert_array_equal(lattice.gamma_conjugate(lattice.gamma_conjugate(A)), A)


def test_flux_observable():
    n, L = 3, 50
    phi = lattice.build_flux_observable(n, L)
    m = 2 * L + 1
    one = phi[:m, :m]
    assert one[-(n + 2) + L, -n + L] == pytest.approx(0.25j)
    assert one[-n + L, -(n + 2) + L] == pytest.approx(-0.25j)
    assert np.count_nonzero(one) == 2
    np.testing.assert_array_equal(phi[m:, m:], one)
    assert np.linalg.matrix_rank(phi) == 4
    assert np.trace(phi) == 0
    assert lattice.is_hamiltonian(phi)
    with pytest.raises(ValueError):
        lattice.build_flux_observable(3, 5)


@pytest.mark.parametrize("gamma", [0.0, 1.0, 2.5])
def test_flux_observable_is_left_current(gamma):
    n, L = 3, 50
    Hg = lattice.build_H_gamma(gamma, 0, L)
    HL = lattice.build_H_reservoir(n, L, "L")
    np.testing.assert_allclose(-1j * (Hg @ HL - HL @ Hg), lattice.build_flux_observable(n, L), atol=1e-15)


def test_S_d_infinite_temperature():
    S = lattice.build_S_d(LatticeConfig(2, 0, 1.0, 0.0, 0.0, 10))
    np.testing.assert_allclose(S, 0.5 * np.eye(S.shape[0]), atol=1e-15)


def test_S_d_two_point_and_invariant():
    cfg = LatticeConfig(2, 0, 1.0, 1.0, 2.0, 50)
    S = lattice.build_S_d(cfg)
    w = np.linalg.eigvalsh(S)
    assert w.min() >= -1e-14 and w.max() <= 1 + 1e-14
    np.testing.assert_allclose(lattice.gamma_conjugate(S), np.eye(S.shape[0]) - S, atol=1e-12)
    assert lattice.is_two_point(S)
    Hd = lattice.build_H_decoupled(cfg.n, cfg.trunc)
    assert np.max(np.abs(S @ Hd - Hd @ S)) < 1e-12


def test_S_d_sample_block_is_half():
    cfg = LatticeConfig(2, 0, 1.0, 1.0, 3.0, 20)
    S = lattice.build_S_d(cfg)
    _, ps, _ = lattice.reservoir_projectors(cfg.n, cfg.trunc)
    np.testing.assert_allclose(S[:41, :41][np.ix_(ps, ps)], 0.5 * np.eye(ps.sum()), atol=1e-15)


def test_symmetries_report():
    rep = lattice.check_symmetries(10)
    assert rep["shift_interior"] == 0
    assert rep["parity"] == 0
    assert rep["gauge"] == 0
    assert rep["shift_boundary"] > 0
    with pytest.raises(ValueError):
        lattice.check_symmetries(1)


@pytest.mark.parametrize(
    "kwargs",
    [
        dict(n=2, a=2, gamma=1, beta_l=1, beta_r=2, trunc=10),
        dict(n=2, a=-3, gamma=1, beta_l=1, beta_r=2, trunc=10),
        dict(n=2, a=0, gamma=1, beta_l=2, beta_r=1, trunc=10),
        dict(n=2, a=0, gamma=1, beta_l=-1, beta_r=1, trunc=10),
        dict(n=2, a=0, gamma=1, beta_l=1, beta_r=2, trunc=4),
        dict(n=0, a=0, gamma=1, beta_l=1, beta_r=2, trunc=10),
    ],
)
def test_config_rejects(kwargs):
    with pytest.raises(ValueError):
        LatticeConfig(**kwargs)


@settings(max_examples=25, deadline=None)
@given(
    n=st.integers(1, 4),
    gamma=st.floats(-4, 4),
    bl=st.floats(0, 5),
    dbeta=st.floats(0, 5),
    data=st.data(),
)
def test_random_configs_keep_contracts(n, gamma, bl, dbeta, data):
    a = data.draw(st.integers(-n, n - 1))
    cfg = LatticeConfig(n, a, gamma, bl, bl + dbeta, n + 6)
    assert lattice.is_hamiltonian(lattice.build_H_gamma(gamma, a, cfg.trunc))
    assert lattice.is_two_point(lattice.build_S_d(cfg))
