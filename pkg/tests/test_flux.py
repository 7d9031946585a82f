import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.integrate import quad

from nessxy import flux
from nessxy.lattice import LatticeConfig


def full_domain_flux(gamma, beta_l, beta_r, panels=2000, order=50):
    """Composite Gauss-Legendre over [-pi, pi] (10^5 nodes) of the unreduced integrand."""
    t, w = np.polynomial.legendre.leggauss(order)
    edges = np.linspace(-np.pi, np.pi, panels + 1)
    mid, half = 0.5 * (edges[1:] + edges[:-1]), 0.5 * np.diff(edges)
    k = (mid[:, None] + half[:, None] * t).ravel()
    wk = (half[:, None] * w).ravel()
    return float(np.sum(wk * flux.flux_integrand(gamma, beta_l, beta_r, k)) / (2 * np.pi))


def test_coefficients():
    assert flux.coefficients(0.0) == flux.FluxCoefficients(1, 0, 0)
    assert flux.coefficients(1.0) == flux.FluxCoefficients(0, 1, 9 / 16)
    assert flux.coefficients(2.0) == flux.FluxCoefficients(9, 16, 0)


@given(st.floats(-10, 10))
def test_coefficients_nonnegative(g):
    co = flux.coefficients(g)
    assert co.a >= 0 and co.b >= 0 and co.c >= 0 and co.a + co.b + co.c > 0


def test_bracket_values():
    s = np.array([-0.7, 0.2, 1.0])
    np.testing.assert_array_equal(flux.bracket(0.0, s), 1.0)
    assert flux.bracket(1.0, 1.0) == pytest.approx(8 / 25, rel=1e-15)
    assert flux.bracket(1.0, -1.0) == pytest.approx(8 / 25, rel=1e-15)


def test_bracket_continuous_at_gamma_two_origin():
    # c vanishes at |gamma| = 2 and the s^2 factor cancels; the limit is 1/2
    assert flux.bracket(2.0, 0.0) == 0.5
    assert flux.bracket(2.0, 1e-6) == pytest.approx(0.5, abs=1e-10)


def test_bracket_in_unit_interval():
    rng = np.random.default_rng(0)
    g = rng.uniform(-5, 5, 100)
    s = rng.uniform(-1, 1, (100, 1000))
    vals = np.array([flux.bracket(gi, si) for gi, si in zip(g, s)])
    assert vals.min() >= 0 and vals.max() <= 1


@pytest.mark.parametrize("gamma", [0.0, 0.8, 2.0, 3.3])
def test_equilibrium_has_no_flux(gamma):
    res = flux.heat_flux(gamma, 1.5, 1.5)
    assert abs(res.J) <= 1e-10
    assert res.lower_bound is None
    assert flux.entropy_production(res, 1.5, 1.5) == 0


def test_isotropic_flux_matches_full_domain_rule():
    J = flux.heat_flux(0.0, 1.0, 2.0).J
    assert J == pytest.approx(full_domain_flux(0.0, 1.0, 2.0), abs=1e-12)
    assert J == pytest.approx(0.03893421241396092, abs=1e-12)


def test_domain_reduction_random():
    rng = np.random.default_rng(4)
    for _ in range(10):
        g = rng.uniform(-4, 4)
        bl = rng.uniform(0, 3)
        br = bl + rng.uniform(0, 3)
        assert flux.heat_flux(g, bl, br).J == pytest.approx(full_domain_flux(g, bl, br), abs=1e-10)


@pytest.mark.parametrize("gamma", [0.5, 1.7, 3.0])
def test_flux_even(gamma):
    assert abs(flux.heat_flux(gamma, 1, 2).J - flux.heat_flux(-gamma, 1, 2).J) <= 1e-13


def test_result_fields_consistent():
    res = flux.heat_flux(1.3, 0.5, 3.0)
    assert res.converged and res.quad_error <= flux.DEFAULT_TOL
    assert res.sigma == (3.0 - 0.5) * res.J
    assert res.lower_bound <= res.J + res.quad_error
    assert res.J <= res.upper_bound + res.quad_error
    assert res.as_dict()["J"] == res.J
    with pytest.raises(ValueError):
        flux.heat_flux(1.0, 1, 2, tol=0)


def test_lower_bound_examples():
    lb = flux.flux_lower_bound(1.0, 1.0, 2.0)
    assert np.isfinite(lb) and 0 < lb <= flux.heat_flux(1.0, 1.0, 2.0).J
    with pytest.raises(ValueError):
        flux.flux_lower_bound(1.0, 2.0, 2.0)


@pytest.mark.parametrize("delta", [0.03, 0.5, 2.0, 7.0])
def test_lower_bound_integrals_match_quadrature(delta):
    d0 = quad(lambda k: np.sin(2 * k) * np.sin(k) ** 2 * np.sinh(delta * np.cos(k)) / (4 * np.pi), 0, np.pi / 2)[0]
    d1 = quad(lambda k: np.sin(2 * k) * np.sinh(delta * np.cos(k)) / (4 * np.pi), 0, np.pi / 2)[0]
    got = flux.lower_bound_integrals(delta)
    assert got[0] == pytest.approx(d0, rel=1e-10)
    assert got[1] == pytest.approx(d1, rel=1e-10)


def test_lower_bound_integrals_small_delta():
    # series and closed form agree where both are accurate, and both vanish linearly
    lo = flux.lower_bound_integrals(1 - 1e-12)
    hi = flux.lower_bound_integrals(1 + 1e-12)
    assert lo[0] == pytest.approx(hi[0], rel=1e-13)
    assert lo[1] == pytest.approx(hi[1], rel=1e-13)
    tiny = flux.lower_bound_integrals(1e-8)
    assert tiny[0] == pytest.approx(1e-8 / (15 * np.pi), rel=1e-12)
    assert tiny[1] == pytest.approx(1e-8 / (6 * np.pi), rel=1e-12)


@settings(max_examples=40, deadline=None)
@given(g=st.floats(-4, 4).filter(lambda g: g == 0 or abs(g) > 1e-100),
       bl=st.floats(0, 4), dbeta=st.floats(0.05, 4))
def test_second_law_sandwich(g, bl, dbeta):
    br = bl + dbeta
    res = flux.heat_flux(g, bl, br)
    assert res.lower_bound > 0
    assert res.lower_bound <= res.J + res.quad_error
    assert res.J <= 0.5 + res.quad_error
    assert 0 < res.sigma <= 0.5 * (br - bl) + res.quad_error


@settings(max_examples=30, deadline=None)
@given(g=st.floats(0.05, 4), bl=st.floats(0, 3), dbeta=st.floats(0.1, 3))
def test_isotropic_chain_dominates(g, bl, dbeta):
    assert flux.heat_flux(g, bl, bl + dbeta).J < flux.heat_flux(0.0, bl, bl + dbeta).J


def test_entropy_production_accepts_plain_value():
    assert flux.entropy_production(0.25, 1.0, 3.0) == 0.5
    res = flux.heat_flux(1.0, 1.0, 2.0)
    assert 0 < flux.entropy_production(res, 1.0, 2.0) <= 0.5


def test_two_point_trivial():
    cfg = LatticeConfig(2, 0, 0.0, 0.0, 0.0, 5)
    v = flux.ness_ac_two_point(0.0, cfg, flux.localized(0), flux.localized(0))
    assert v == pytest.approx(0.5, abs=1e-14)


def test_two_point_hermitian():
    cfg = LatticeConfig(3, -1, 1.4, 0.7, 2.5, 6)
    F = {**flux.localized(-3), **flux.localized(1, hole=True, coeff=0.5j)}
    G = {**flux.localized(-5), **flux.localized(0, coeff=-1.0)}
    fg = flux.ness_ac_two_point(1.4, cfg, F, G)
    gf = flux.ness_ac_two_point(1.4, cfg, G, F)
    assert fg == pytest.approx(np.conj(gf), abs=1e-14)


@pytest.mark.parametrize("gamma", [0.0, 0.5, 1.0, 2.0, 3.0])
@pytest.mark.parametrize("n,a", [(2, 0), (5, -3), (8, 4)])
def test_flux_from_wave_operator(gamma, n, a):
    rec = flux.flux_from_wave_operator(gamma, n, a, 1.0, 2.0)
    assert rec["J"] == pytest.approx(flux.heat_flux(gamma, 1.0, 2.0).J, abs=1e-8)
    assert rec["J1"] == pytest.approx(rec["J2"], abs=1e-10)
    assert abs(rec["overlap"]) < 1e-12


def test_sweep_sorted_symmetric_and_thread_independent():
    grid = np.linspace(-4, 4, 33)
    rows = flux.sweep(grid[::-1], 1.0, 2.0, workers=4)
    assert [r.gamma for r in rows] == sorted(r.gamma for r in rows)
    J = np.array([r.J for r in rows])
    np.testing.assert_array_equal(J, J[::-1])
    assert all(r.sigma == r.J for r in rows)
    assert np.argmax(J) == 16
    serial = flux.sweep(grid, 1.0, 2.0, workers=1)
    assert [r.J for r in serial] == [r.J for r in rows]
    with pytest.raises(ValueError):
        flux.sweep([], 1.0, 2.0)
