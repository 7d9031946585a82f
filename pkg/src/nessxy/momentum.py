"""Momentum- and energy-space representations.

Momentum space is ``L^2([-pi, pi]; dk / 2pi)`` with plane waves
``e_x(k) = exp(i k x)``; the lattice hopping acts there as multiplication by
``cos k``.  Energy space is ``L^2([-1, 1], C^2; de)``, reached through the
change of variables ``e = cos k`` on the two halves of the Brillouin zone.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.special import expit, roots_chebyt

__all__ = [
    "DEFAULT_GRID",
    "MomentumFunction",
    "EnergyFunctionPair",
    "momentum_grid",
    "plane_wave",
    "fermi_dirac",
    "delta_fermi",
    "delta_fermi_hyperbolic",
    "s_alpha_beta",
    "energy_transform",
    "energy_adjoint",
    "momentum_norm",
    "energy_norm",
]

DEFAULT_GRID = 4096


@dataclass(frozen=True)
class MomentumFunction:
    """A function of ``k in [-pi, pi]`` given by a vectorized evaluator.

    ``exceptional`` lists momenta where the evaluator is not defined (or not
    trusted); grid sampling drops them.
    """

    evaluator: Callable[[np.ndarray], np.ndarray]
    exceptional: tuple[float, ...] = ()

    def __call__(self, k):
        return self.evaluator(np.asarray(k, dtype=float))

    def on_grid(self, size: int = DEFAULT_GRID) -> tuple[np.ndarray, np.ndarray]:
        """Samples on the uniform grid ``k_j = -pi + 2 pi j / size``, exceptional points removed."""
        k = momentum_grid(size, exclude=self.exceptional)
        return k, self(k)


@dataclass(frozen=True)
class EnergyFunctionPair:
    """The two ``C^2``-fiber components ``[eta_1(e), eta_2(e)]`` on ``(-1, 1)``."""

    first: Callable[[np.ndarray], np.ndarray]
    second: Callable[[np.ndarray], np.ndarray]

    def __call__(self, e):
        e = np.asarray(e, dtype=float)
        return self.first(e), self.second(e)


def momentum_grid(size: int = DEFAULT_GRID, exclude=()) -> np.ndarray:
    k = -np.pi + 2 * np.pi * np.arange(size) / size
    if exclude:
        keep = np.ones(size, dtype=bool)
        for k0 in exclude:
            keep &= ~np.isclose(k, k0, rtol=0, atol=1e-12)
        k = k[keep]
    return k


def plane_wave(x: int) -> MomentumFunction:
    return MomentumFunction(lambda k: np.exp(1j * k * x))


def fermi_dirac(beta, e):
    """``1 / (1 + exp(beta e))`` without overflow for large ``|beta e|``."""
    return expit(-np.multiply(beta, e))


def delta_fermi(beta_l, beta_r, e):
    """``rho_{beta_l}(e) - rho_{beta_r}(e)``.

    Evaluated as the difference of two logistic values on ``|e|`` and signed
    afterwards, so the result is exactly odd in ``e``.
    """
    e = np.asarray(e, dtype=float)
    ae = np.abs(e)
    d = expit(-beta_l * ae) - expit(-beta_r * ae)
    return np.sign(e) * d


def delta_fermi_hyperbolic(beta_l, beta_r, e):
    """The same difference written with sinh/cosh; used only as a cross-check."""
    e = np.asarray(e, dtype=float)
    half_diff = 0.5 * (beta_r - beta_l) * e
    half_sum = 0.5 * (beta_r + beta_l) * e
    return np.sinh(half_diff) / (np.cosh(half_diff) + np.cosh(half_sum))


def s_alpha_beta(alpha, beta, k):
    """``rho_alpha(cos k)`` for ``k >= 0`` and ``rho_beta(cos k)`` for ``k < 0``.

    ``k = 0`` belongs to the first branch.
    """
    k = np.asarray(k, dtype=float)
    c = np.cos(k)
    return np.where(k >= 0, fermi_dirac(alpha, c), fermi_dirac(beta, c))


def energy_transform(phi: MomentumFunction) -> EnergyFunctionPair:
    """Unitary map to energy space: ``[phi(arccos e), phi(-arccos e)] / (sqrt(2 pi) (1-e^2)^(1/4))``.

    The endpoints ``|e| = 1`` carry an integrable singularity and are never
    evaluated by the quadratures used here.
    """

    def weight(e):
        return np.sqrt(2 * np.pi) * (1 - e * e) ** 0.25

    def first(e):
        return phi(np.arccos(e)) / weight(e)

    def second(e):
        return phi(-np.arccos(e)) / weight(e)

    return EnergyFunctionPair(first, second)


def energy_adjoint(eta: EnergyFunctionPair) -> MomentumFunction:
    """Adjoint (= inverse) of :func:`energy_transform`."""

    def evaluator(k):
        c = np.cos(k)
        w = np.sqrt(2 * np.pi) * np.abs(np.sin(k)) ** 0.5
        return w * np.where(k >= 0, eta.first(c), eta.second(c))

    return MomentumFunction(evaluator, exceptional=(-np.pi, 0.0, np.pi))


def momentum_norm(phi: MomentumFunction, size: int = DEFAULT_GRID) -> float:
    """``||phi||`` in ``L^2(dk/2pi)`` by the periodic trapezoid rule, shifted off ``{0, +-pi}``."""
    k = -np.pi + 2 * np.pi * (np.arange(size) + 0.5) / size
    return float(np.sqrt(np.mean(np.abs(phi(k)) ** 2)))


def energy_norm(eta: EnergyFunctionPair, nodes: int = 4096) -> float:
    """``||eta||`` in ``L^2([-1,1], C^2; de)`` by Gauss-Chebyshev quadrature.

    The Chebyshev weight ``1/sqrt(1-e^2)`` absorbs the band-edge singularity
    of transformed functions; nodes are interior, so the edges are not touched.
    """
    e, w = roots_chebyt(nodes)
    f1, f2 = eta(e)
    integrand = (np.abs(f1) ** 2 + np.abs(f2) ** 2) * np.sqrt(1 - e * e)
    return float(np.sqrt(np.sum(w * integrand)))
