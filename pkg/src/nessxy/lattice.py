"""Finite-lattice one-particle operators and their selfdual (Nambu) liftings.

The two-sided chain is truncated to the window ``x in [-L, L]`` with a hard
cut.  Site ``x`` lives at array index ``x + L``; doubled vectors are stored
particle block first, hole block second, so a doubled operator is a
``(2M, 2M)`` array with ``M = 2L + 1``.

Conventions: ``Re[A] = (A + A*)/2``, ``Im[A] = (A - A*)/(2i)`` and the rank-one
localization ``p_{x,y} f = f(x) delta_y`` (i.e. the matrix unit at row ``y``,
column ``x``).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .momentum import fermi_dirac

__all__ = [
    "LatticeConfig",
    "PAULI",
    "site_index",
    "build_h",
    "build_v_decoupling",
    "build_v_anisotropy",
    "lift",
    "gamma_conjugate",
    "apply_gamma",
    "is_hamiltonian",
    "is_two_point",
    "reservoir_projectors",
    "build_H",
    "build_H_decoupled",
    "build_H_gamma",
    "build_H_reservoir",
    "build_flux_observable",
    "build_flux_observable_right",
    "build_S_d",
    "check_symmetries",
]

PAULI = {
    0: np.eye(2, dtype=complex),
    1: np.array([[0, 1], [1, 0]], dtype=complex),
    2: np.array([[0, -1j], [1j, 0]], dtype=complex),
    3: np.array([[1, 0], [0, -1]], dtype=complex),
}


@dataclass(frozen=True)
class LatticeConfig:
    """Physical parameters of the nonequilibrium setting plus the truncation.

    Attributes
    ----------
    n : int
        Sample half-width, the sample occupies ``|x| <= n``.
    a : int
        Left site of the anisotropy bond ``{a, a+1}``; ``-n <= a <= n-1``.
    gamma : float
        Anisotropy strength.
    beta_l, beta_r : float
        Inverse temperatures of the left and right reservoirs
        (``0 <= beta_l <= beta_r``).  The sample starts at infinite
        temperature.
    trunc : int
        Truncation half-width ``L``; the lattice is ``[-L, L]``.
    """

    n: int
    a: int
    gamma: float
    beta_l: float
    beta_r: float
    trunc: int

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"sample half-width must be >= 1, got n={self.n}")
        if not -self.n <= self.a <= self.n - 1:
            raise ValueError(
                f"anisotropy site must satisfy -n <= a <= n-1, got a={self.a}, n={self.n}"
            )
        if self.trunc <= self.n + 2:
            raise ValueError(
                f"truncation must exceed n + 2, got trunc={self.trunc}, n={self.n}"
            )
        if self.beta_l < 0 or self.beta_r < 0:
            raise ValueError("inverse temperatures must be nonnegative")
        if self.beta_l > self.beta_r:
            raise ValueError(
                f"expected beta_l <= beta_r, got ({self.beta_l}, {self.beta_r})"
            )

    @property
    def size(self) -> int:
        return 2 * self.trunc + 1


def site_index(x: int, trunc: int) -> int:
    """Array index of lattice site ``x`` in the window ``[-trunc, trunc]``."""
    if abs(x) > trunc:
        raise IndexError(f"site {x} outside the truncated lattice [-{trunc}, {trunc}]")
    return x + trunc


def build_h(trunc: int) -> np.ndarray:
    """Truncated hopping ``h = Re[u]``: 1/2 on both off-diagonals."""
    if trunc < 1:
        raise ValueError(f"trunc must be >= 1, got {trunc}")
    m = 2 * trunc + 1
    h = np.zeros((m, m))
    idx = np.arange(m - 1)
    h[idx, idx + 1] = 0.5
    h[idx + 1, idx] = 0.5
    return h


def build_v_decoupling(n: int, trunc: int) -> np.ndarray:
    """The two bonds ``{-(n+1), -n}`` and ``{n, n+1}`` that tie sample to reservoirs."""
    if trunc <= n + 1:
        raise ValueError(f"need trunc > n + 1, got trunc={trunc}, n={n}")
    m = 2 * trunc + 1
    v = np.zeros((m, m))
    for x, y in ((-(n + 1), -n), (n, n + 1)):
        i, j = site_index(x, trunc), site_index(y, trunc)
        v[i, j] = v[j, i] = 0.5
    return v


def build_v_anisotropy(a: int, trunc: int) -> np.ndarray:
    """One-particle part ``v = Im[p_{a+1,a}]`` of the local anisotropy."""
    if abs(a) + 1 > trunc:
        raise ValueError(f"bond {{a, a+1}} = {{{a}, {a + 1}}} does not fit in trunc={trunc}")
    m = 2 * trunc + 1
    v = np.zeros((m, m), dtype=complex)
    i, j = site_index(a, trunc), site_index(a + 1, trunc)
    v[i, j] = -0.5j
    v[j, i] = 0.5j
    return v


def lift(m: np.ndarray, pauli: int) -> np.ndarray:
    """Lift a one-particle matrix to the doubled space as ``m (x) sigma_pauli``.

    ``pauli`` is 0, 2 or 3 (1 works too but no builder needs it).  The Pauli
    factor acts on the particle/hole index, which is the block index here.
    """
    m = np.asarray(m)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    return np.kron(PAULI[pauli], m)


def _block_swap(A: np.ndarray) -> np.ndarray:
    m = A.shape[0] // 2
    return np.block([[A[m:, m:], A[m:, :m]], [A[:m, m:], A[:m, :m]]])


def gamma_conjugate(A: np.ndarray) -> np.ndarray:
    """Matrix of ``Gamma A Gamma`` where ``Gamma`` = complex conjugation times ``sigma_1``."""
    return np.conj(_block_swap(np.asarray(A)))


def apply_gamma(F: np.ndarray) -> np.ndarray:
    """Apply the antiunitary involution ``Gamma`` to a doubled vector."""
    F = np.asarray(F)
    m = F.shape[0] // 2
    return np.conj(np.concatenate([F[m:], F[:m]]))


def is_hamiltonian(A: np.ndarray, atol: float = 1e-14) -> bool:
    """``A* = A`` and ``Gamma A Gamma = -A`` up to ``atol`` in max norm."""
    return bool(
        np.max(np.abs(A - A.conj().T)) <= atol
        and np.max(np.abs(gamma_conjugate(A) + A)) <= atol
    )


def is_two_point(S: np.ndarray, atol: float = 1e-12) -> bool:
    """``S* = S``, ``0 <= S <= 1`` and ``Gamma S Gamma = 1 - S``."""
    if np.max(np.abs(S - S.conj().T)) > atol:
        return False
    ev = np.linalg.eigvalsh(S)
    if ev[0] < -atol or ev[-1] > 1 + atol:
        return False
    return bool(np.max(np.abs(gamma_conjugate(S) - (np.eye(len(S)) - S))) <= atol)


def reservoir_projectors(n: int, trunc: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Boolean site masks of the left reservoir, the sample and the right reservoir."""
    x = np.arange(-trunc, trunc + 1)
    return x <= -(n + 1), np.abs(x) <= n, x >= n + 1


def build_H(trunc: int) -> np.ndarray:
    """XY Hamiltonian ``H = h sigma_3``."""
    return lift(build_h(trunc), 3)


def build_H_decoupled(n: int, trunc: int) -> np.ndarray:
    """Decoupled Hamiltonian ``H - V_d`` with ``V_d = v_d sigma_3``."""
    return lift(build_h(trunc) - build_v_decoupling(n, trunc), 3)


def build_H_gamma(gamma: float, a: int, trunc: int) -> np.ndarray:
    """Anisotropy Hamiltonian ``H + gamma V`` with ``V = v sigma_2``."""
    return build_H(trunc) + gamma * lift(build_v_anisotropy(a, trunc), 2)


def build_H_reservoir(n: int, trunc: int, side: str) -> np.ndarray:
    """Lifted reservoir Hamiltonian ``H_L`` or ``H_R`` (``side`` is ``'L'`` or ``'R'``)."""
    if side not in ("L", "R"):
        raise ValueError(f"side must be 'L' or 'R', got {side!r}")
    left, _, right = reservoir_projectors(n, trunc)
    mask = left if side == "L" else right
    h = build_h(trunc)
    return lift(h * np.outer(mask, mask), 3)


def build_flux_observable(n: int, trunc: int) -> np.ndarray:
    """Energy current from the left reservoir, ``1/2 Im[p_{-(n+2),-n}] sigma_0``."""
    if trunc <= n + 2:
        raise ValueError(f"need trunc > n + 2, got trunc={trunc}, n={n}")
    m = 2 * trunc + 1
    phi = np.zeros((m, m), dtype=complex)
    i, j = site_index(-n, trunc), site_index(-(n + 2), trunc)
    phi[i, j] = -0.25j
    phi[j, i] = 0.25j
    return lift(phi, 0)


def build_flux_observable_right(config: LatticeConfig) -> np.ndarray:
    """Energy current from the right reservoir, ``-i [H_gamma, H_R]``."""
    Hg = build_H_gamma(config.gamma, config.a, config.trunc)
    HR = build_H_reservoir(config.n, config.trunc, "R")
    return -1j * (Hg @ HR - HR @ Hg)


def _fermi_of_block(h_block: np.ndarray, beta: float) -> np.ndarray:
    w, U = np.linalg.eigh(h_block)
    return (U * fermi_dirac(beta, w)) @ U.conj().T


def build_S_d(config: LatticeConfig) -> np.ndarray:
    """Two-point operator ``(1 - s_d) + conj(s_d)`` of the decoupled initial state.

    ``s_d = rho_1(beta_l h_L + beta_r h_R)`` with the sample at ``beta = 0``;
    each reservoir block is diagonalized on its own.
    """
    n, L = config.n, config.trunc
    h = build_h(L)
    left, sample, right = reservoir_projectors(n, L)
    s = np.zeros((config.size, config.size))
    for mask, beta in ((left, config.beta_l), (right, config.beta_r)):
        idx = np.flatnonzero(mask)
        s[np.ix_(idx, idx)] = _fermi_of_block(h[np.ix_(idx, idx)], beta)
    idx = np.flatnonzero(sample)
    s[idx, idx] = 0.5
    one = np.eye(config.size)
    zero = np.zeros_like(s)
    return np.block([[one - s, zero], [zero, np.conj(s)]]).astype(complex)


def check_symmetries(trunc: int) -> dict[str, float]:
    """Max violation of ``[h,u]=0``, ``[h,theta]=0`` and ``{h,xi}=0``.

    Only interior rows ``|x| <= trunc - 1`` are inspected for the shift, where
    the truncated translation is still a translation.  Parity and the local
    gauge act within the window, so they are checked on all rows.
    """
    if trunc < 2:
        raise ValueError(f"trunc must be >= 2, got {trunc}")
    h = build_h(trunc)
    m = h.shape[0]
    x = np.arange(-trunc, trunc + 1)
    u = np.eye(m, k=-1)
    theta = np.fliplr(np.eye(m))
    xi = np.diag((-1.0) ** x)
    interior = np.abs(x) <= trunc - 1
    return {
        "shift_interior": float(np.max(np.abs((h @ u - u @ h)[np.ix_(interior, interior)]))),
        "shift_boundary": float(np.max(np.abs(h @ u - u @ h))),
        "parity": float(np.max(np.abs(h @ theta - theta @ h))),
        "gauge": float(np.max(np.abs(h @ xi + xi @ h))),
    }
