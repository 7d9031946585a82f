"""Brute-force verification path on the truncated lattice.

Nothing in here uses the closed-form scattering solution.  The ergodic mean
is realized literally: the decoupled initial state is evolved with the full
anisotropy Hamiltonian and the flux observable is averaged over a late time
window.  All time dependence is handled exactly in the eigenbasis.

On a finite lattice the ergodic mean is only meaningful before waves
launched at the junctions come back from the hard walls; the maximal group
velocity of the ``cos k`` band is 1, which sets the guard
``T <= trunc - (n + 2)``.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np
from scipy import linalg
from scipy.integrate import cumulative_trapezoid

from . import lattice
from .lattice import LatticeConfig
from .momentum import DEFAULT_GRID, momentum_grid

__all__ = [
    "WavefrontError",
    "EigenSystem",
    "OracleRun",
    "diagonalize",
    "window_average",
    "evolution_matrix",
    "evolved_two_point",
    "check_horizon",
    "ergodic_expectation",
    "ergodic_flux",
    "first_law_check",
    "lattice_resolvent",
    "numerical_resolvent",
    "numerical_interaction_matrix",
    "bound_states",
    "pp_flux_check",
    "numerical_wave_apply",
    "running_ergodic_mean",
]

DEGENERATE_GAP = 1e-12


class WavefrontError(ValueError):
    """The requested time horizon lets boundary reflections reach the flux sites."""


@dataclass(frozen=True)
class EigenSystem:
    values: np.ndarray
    vectors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        return (self.vectors * self.values) @ self.vectors.conj().T

    def propagate(self, t: float, F: np.ndarray) -> np.ndarray:
        """``exp(i t A) F`` for a vector or a matrix of column vectors."""
        U = self.vectors
        phase = np.exp(1j * t * self.values)
        coef = U.conj().T @ F
        return U @ (phase * coef if coef.ndim == 1 else phase[:, None] * coef)


@dataclass(frozen=True)
class OracleRun:
    config: LatticeConfig
    T: float
    window: tuple[float, float]
    J_num: float
    J_right: float
    first_law_residual: float
    bound_state_count: int
    reach: float

    def as_dict(self) -> dict:
        d = asdict(self)
        d["window"] = list(self.window)
        return d


def diagonalize(A: np.ndarray) -> EigenSystem:
    """Full Hermitian eigendecomposition, eigenvalues ascending."""
    A = np.asarray(A)
    if np.max(np.abs(A - A.conj().T)) > 1e-12:
        raise ValueError("operator is not self-adjoint")
    w, U = linalg.eigh(A)
    return EigenSystem(w, U)


def window_average(omega, t0: float, t1: float):
    """Mean of ``exp(i omega t)`` over ``[t0, t1]``, with the limit 1 at ``omega -> 0``."""
    omega = np.asarray(omega, dtype=float)
    small = np.abs(omega) < DEGENERATE_GAP
    safe = np.where(small, 1.0, omega)
    val = (np.exp(1j * safe * t1) - np.exp(1j * safe * t0)) / (1j * safe * (t1 - t0))
    return np.where(small, 1.0 + 0j, val)


def evolution_matrix(t: float, vectors, eig: EigenSystem, S_d: np.ndarray) -> np.ndarray:
    """``Omega_ij(t) = (exp(itH) Gamma F_i, S_d exp(itH) F_j)`` for the given doubled vectors."""
    F = np.column_stack([np.asarray(v, dtype=complex) for v in vectors])
    GF = np.column_stack([lattice.apply_gamma(F[:, i]) for i in range(F.shape[1])])
    left = eig.propagate(t, GF)
    right = eig.propagate(t, F)
    return left.conj().T @ S_d @ right


def evolved_two_point(t: float, F, G, eig: EigenSystem, S_d: np.ndarray) -> complex:
    """Single evolution-matrix entry ``(exp(itH) Gamma F, S_d exp(itH) G)``."""
    GF = eig.propagate(t, lattice.apply_gamma(np.asarray(F, dtype=complex)))
    G = eig.propagate(t, np.asarray(G, dtype=complex))
    return complex(np.vdot(GF, S_d @ G))


def check_horizon(config: LatticeConfig, T: float) -> float:
    """Return the wavefront reach ``T + n + 2``; raise if it exceeds the lattice."""
    reach = T + config.n + 2
    if reach > config.trunc:
        raise WavefrontError(
            f"time horizon T={T} needs trunc >= {reach:g} (n={config.n}), got trunc={config.trunc}"
        )
    return reach


def _in_eigenbasis(U: np.ndarray, A: np.ndarray) -> np.ndarray:
    rows = np.flatnonzero(np.any(A != 0, axis=1))
    cols = np.flatnonzero(np.any(A != 0, axis=0))
    if rows.size * 4 < A.shape[0]:
        return U[rows].conj().T @ A[np.ix_(rows, cols)] @ U[cols]
    return U.conj().T @ A @ U


def ergodic_expectation(observables, eig: EigenSystem, S_d: np.ndarray, t0: float, t1: float):
    """Window mean of ``-tr(S_d exp(itH) A exp(-itH))`` for each ``A`` in ``observables``.

    Exact in the eigenbasis: the phases ``exp(it(l_i - l_j))`` are averaged in
    closed form.  Returns a list of real numbers.
    """
    U, lam = eig.vectors, eig.values
    Sp = U.conj().T @ S_d @ U
    K = window_average(lam[:, None] - lam[None, :], t0, t1)
    weights = Sp.T * K
    return [float(-np.sum(weights * _in_eigenbasis(U, A)).real) for A in observables]


def ergodic_flux(config: LatticeConfig, T: float, eig: EigenSystem | None = None) -> OracleRun:
    """Heat flux from the decoupled initial state, averaged over ``[T/2, T]``.

    Both the left current and the right current ``-i[H_gamma, H_R]`` are
    computed; ``first_law_residual`` is ``|J_L + J_R|``.
    """
    reach = check_horizon(config, T)
    H = lattice.build_H_gamma(config.gamma, config.a, config.trunc)
    eig = eig or diagonalize(H)
    S_d = lattice.build_S_d(config)
    phi_l = lattice.build_flux_observable(config.n, config.trunc)
    phi_r = lattice.build_flux_observable_right(config)
    J_l, J_r = ergodic_expectation([phi_l, phi_r], eig, S_d, 0.5 * T, T)
    nb = int(np.sum(np.abs(eig.values) > 1 + 1e-8))
    return OracleRun(config, float(T), (0.5 * T, float(T)), J_l, J_r, abs(J_l + J_r), nb, reach)


def first_law_check(config: LatticeConfig, T: float) -> float:
    """``|J_L + J_R|`` from :func:`ergodic_flux`."""
    return ergodic_flux(config, T).first_law_residual


def lattice_resolvent(z: complex, x, trunc: int, source: int = 0) -> np.ndarray:
    """``<delta_x, (h - z)^{-1} delta_source>`` by a banded solve on ``[-trunc, trunc]``."""
    m = 2 * trunc + 1
    ab = np.zeros((3, m), dtype=complex)
    ab[0, 1:] = 0.5
    ab[1, :] = -z
    ab[2, :-1] = 0.5
    rhs = np.zeros(m, dtype=complex)
    rhs[lattice.site_index(source, trunc)] = 1.0
    col = linalg.solve_banded((1, 1), ab, rhs)
    return col[np.asarray(x) + trunc]


def numerical_resolvent(e: float, eps: float, x, trunc: int) -> np.ndarray:
    """``<delta_x, (h - (e - i eps))^{-1} delta_0>`` at finite ``eps > 0``."""
    if not eps > 0:
        raise ValueError("eps must be positive")
    if abs(e) >= 1:
        raise ValueError("energy must lie inside the band")
    return lattice_resolvent(e - 1j * eps, x, trunc)


def numerical_interaction_matrix(gamma: float, e: float, eps: float, trunc: int, a: int = 0) -> np.ndarray:
    """``[(E_i, (1 + gamma V R_{e - i eps}(H)) E_j)]`` from lattice resolvent columns."""
    z = e - 1j * eps
    if not abs(a) + 1 <= trunc:
        raise ValueError(f"bond ({a}, {a + 1}) does not fit in trunc={trunc}")
    sites = np.array([a, a + 1])
    # V lives on E1..E4 only: its block there is the lift of v restricted to {a, a+1}
    v2 = lattice.build_v_anisotropy(0, 1)[1:, 1:]
    V4 = lattice.lift(v2, 2)
    A = np.eye(4, dtype=complex)
    for j, (block, site) in enumerate([(0, a), (0, a + 1), (1, a), (1, a + 1)]):
        # R(H) = r_z(h) (+) -r_{-z}(h), read off at the four basis sites
        col = lattice_resolvent(z if block == 0 else -z, sites, trunc, site)
        RE = np.concatenate([col, np.zeros(2)]) if block == 0 else np.concatenate([np.zeros(2), -col])
        A[:, j] += gamma * (V4 @ RE)
    return A


def bound_states(gamma: float, trunc: int, band_tol: float = 1e-8, a: int = 0,
                 eig: EigenSystem | None = None) -> list[tuple[float, np.ndarray]]:
    """Eigenpairs of ``H_gamma`` with ``|lambda| > 1 + band_tol``."""
    if not band_tol > 0:
        raise ValueError("band_tol must be positive")
    eig = eig or diagonalize(lattice.build_H_gamma(gamma, a, trunc))
    sel = np.flatnonzero(np.abs(eig.values) > 1 + band_tol)
    return [(float(eig.values[i]), eig.vectors[:, i]) for i in sel]


def _clusters(values: np.ndarray, tol: float) -> list[np.ndarray]:
    order = np.argsort(values)
    groups, current = [], [order[0]]
    for i in order[1:]:
        if values[i] - values[current[-1]] <= tol:
            current.append(i)
        else:
            groups.append(np.array(current))
            current = [i]
    groups.append(np.array(current))
    return groups


def pp_flux_check(gamma: float, trunc: int, n: int = 2, a: int = 0, band_tol: float = 1e-8,
                  cluster_tol: float = 1e-9) -> float:
    """``max_e ||1_e Phi 1_e||_max`` over bound-state eigenvalues (near-degenerate ones merged)."""
    states = bound_states(gamma, trunc, band_tol, a)
    if not states:
        return 0.0
    phi = lattice.build_flux_observable(n, trunc)
    values = np.array([v for v, _ in states])
    vectors = np.column_stack([vec for _, vec in states])
    worst = 0.0
    for group in _clusters(values, cluster_tol):
        P = vectors[:, group] @ vectors[:, group].conj().T
        worst = max(worst, float(np.max(np.abs(P @ phi @ P))))
    return worst


def numerical_wave_apply(gamma: float, x: int, a: int, T: float, trunc: int,
                         grid: int = DEFAULT_GRID, samples: int = 16, band_tol: float = 1e-8):
    """Time-dependent ``exp(-itH) exp(itH_gamma) 1_ac(H_gamma) (delta_x + 0)`` in momentum space.

    ``1_ac`` is approximated by removing the bound states; the propagated
    vector is averaged over ``samples`` times in ``[0.9 T, T]``.  Returns
    ``(k, particle, hole, spread)`` on the uniform grid with ``{0, +-pi}``
    removed; ``spread`` is the largest distance of a sample from the mean.
    """
    if T > trunc / 2:
        raise WavefrontError(f"need T <= trunc/2, got T={T}, trunc={trunc}")
    m = 2 * trunc + 1
    eg = diagonalize(lattice.build_H_gamma(gamma, a, trunc))
    w0, U0 = linalg.eigh(lattice.build_h(trunc))
    psi = np.zeros(2 * m, dtype=complex)
    psi[lattice.site_index(x, trunc)] = 1.0
    bound = np.abs(eg.values) > 1 + band_tol
    coef = eg.vectors.conj().T @ psi
    coef[bound] = 0.0
    frames = []
    for t in np.linspace(0.9 * T, T, samples):
        phi = eg.vectors @ (np.exp(1j * t * eg.values) * coef)
        # exp(-itH) with H = h (+) -h
        p = U0 @ (np.exp(-1j * t * w0) * (U0.T @ phi[:m]))
        h = U0 @ (np.exp(1j * t * w0) * (U0.T @ phi[m:]))
        frames.append(np.concatenate([p, h]))
    frames = np.array(frames)
    mean = frames.mean(axis=0)
    spread = float(np.max(np.linalg.norm(frames - mean, axis=1)))
    k = momentum_grid(grid, exclude=(-np.pi, 0.0, np.pi))
    sites = np.arange(-trunc, trunc + 1)
    F = np.exp(1j * np.outer(k, sites))
    return k, F @ mean[:m], F @ mean[m:], spread


def running_ergodic_mean(values: np.ndarray, times: np.ndarray) -> np.ndarray:
    """Cumulative ``(1/t) int_0^t`` of sampled values by the trapezoid rule (``times[0] = 0``)."""
    cum = cumulative_trapezoid(values, times, initial=0.0)
    out = np.empty_like(cum)
    out[0] = values[0]
    out[1:] = cum[1:] / times[1:]
    return out
