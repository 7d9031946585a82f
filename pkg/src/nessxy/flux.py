"""NESS heat flux, entropy production and their analytic bounds."""

from __future__ import annotations

import os
from math import factorial
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, replace
from typing import Mapping

import numpy as np
from scipy import integrate

from .lattice import LatticeConfig
from .momentum import delta_fermi, s_alpha_beta
from .scattering import WaveImage, wave_apply, wave_apply_hole

__all__ = [
    "DEFAULT_TOL",
    "FluxCoefficients",
    "FluxResult",
    "coefficients",
    "bracket",
    "flux_integrand",
    "heat_flux",
    "lower_bound_integrals",
    "flux_lower_bound",
    "entropy_production",
    "localized",
    "ness_ac_two_point",
    "flux_from_wave_operator",
    "sweep",
]

DEFAULT_TOL = 1e-10
UPPER_BOUND = 0.5
_SERIES_TERMS = 12


@dataclass(frozen=True)
class FluxCoefficients:
    a: float
    b: float
    c: float


@dataclass(frozen=True)
class FluxResult:
    """Heat flux at one parameter point.

    ``lower_bound`` is ``None`` unless ``beta_r > beta_l``.  ``converged`` is
    False when the adaptive quadrature could not certify ``tol``; ``J`` is
    then the best available estimate and ``quad_error`` its error estimate.
    """

    gamma: float
    beta_l: float
    beta_r: float
    J: float
    sigma: float
    lower_bound: float | None
    upper_bound: float
    quad_error: float
    converged: bool = True

    def as_dict(self) -> dict:
        return asdict(self)


def coefficients(gamma: float) -> FluxCoefficients:
    g2 = gamma * gamma
    return FluxCoefficients(
        a=(1 - g2) ** 2,
        b=0.5 * g2 * ((2 - g2) ** 2 + g2),
        c=g2 * g2 * (4 - g2) ** 2 / 16,
    )


def bracket(gamma: float, s):
    """``1 - P_gamma(s)/Q_gamma(s)`` written as ``(a s^4 + b s^2/2) / (a s^4 + b s^2 + c)``.

    Where ``c = 0`` (``gamma = 0`` or ``|gamma| = 2``) a common ``s^2`` is
    cancelled first, which gives the continuous extension at ``s = 0``
    (1 at ``gamma = 0``, 1/2 at ``|gamma| = 2``).
    """
    co = coefficients(gamma)
    s2 = np.asarray(s, dtype=float) ** 2
    if co.c == 0.0:
        return (co.a * s2 + 0.5 * co.b) / (co.a * s2 + co.b)
    return (co.a * s2 * s2 + 0.5 * co.b * s2) / (co.a * s2 * s2 + co.b * s2 + co.c)


def flux_integrand(gamma: float, beta_l: float, beta_r: float, k):
    """Full-zone integrand: ``J = int_{-pi}^{pi} dk/2pi`` of this."""
    k = np.asarray(k, dtype=float)
    return 0.5 * np.sin(2 * np.abs(k)) * delta_fermi(beta_l, beta_r, np.cos(k)) * bracket(gamma, np.sin(k))


def _reduced_integrand(k, gamma, beta_l, beta_r):
    return np.sin(2 * k) * delta_fermi(beta_l, beta_r, np.cos(k)) * bracket(gamma, np.sin(k)) / np.pi


def heat_flux(gamma: float, beta_l: float, beta_r: float, tol: float = DEFAULT_TOL) -> FluxResult:
    """Heat flux ``J_gamma`` from the left reservoir into the sample.

    The full-zone integral is folded onto ``[0, pi/2]`` with the symmetries
    ``k -> -k`` and ``k -> pi - k`` and evaluated by adaptive Gauss-Kronrod
    quadrature to absolute tolerance ``tol``.
    """
    if not tol > 0:
        raise ValueError("tol must be positive")
    J, err, info = integrate.quad(
        _reduced_integrand, 0.0, 0.5 * np.pi, args=(gamma, beta_l, beta_r),
        epsabs=tol, epsrel=0.0, limit=200, full_output=True,
    )[:3]
    converged = err <= tol
    lower = flux_lower_bound(gamma, beta_l, beta_r) if beta_r > beta_l else None
    return FluxResult(
        gamma=float(gamma), beta_l=float(beta_l), beta_r=float(beta_r),
        J=float(J), sigma=entropy_production(J, beta_l, beta_r),
        lower_bound=lower, upper_bound=UPPER_BOUND,
        quad_error=float(err), converged=bool(converged),
    )


def lower_bound_integrals(delta: float) -> tuple[float, float]:
    """``(d0, d1)``: the integrals ``int_0^{pi/2} dk/4pi sin 2k sinh(delta cos k)`` with and without ``sin^2 k``.

    The closed forms cancel to ``O(delta^5)`` and ``O(delta^3)`` out of
    ``O(delta)`` terms, so for ``|delta| < 1`` their power series is summed
    instead.
    """
    d = float(delta)
    if abs(d) < 1:
        d2 = d * d
        s0 = s1 = 0.0
        for j in range(_SERIES_TERMS, 0, -1):
            # coefficients of delta^(2j+1) in (3 + d^2) sinh d - 3 d cosh d and in d cosh d - sinh d
            s0 = s0 * d2 + 3 / factorial(2 * j + 3) + 1 / factorial(2 * j + 1) - 3 / factorial(2 * j + 2)
            s1 = s1 * d2 + 1 / factorial(2 * j) - 1 / factorial(2 * j + 1)
        return d * s0 / np.pi, s1 * d / (2 * np.pi)
    d0 = ((3 + d * d) * np.sinh(d) - 3 * d * np.cosh(d)) / (np.pi * d**4)
    d1 = (d * np.cosh(d) - np.sinh(d)) / (2 * np.pi * d * d)
    return d0, d1


def flux_lower_bound(gamma: float, beta_l: float, beta_r: float) -> float:
    """Strictly positive lower bound on ``J_gamma`` out of equilibrium.

    For ``gamma != 0`` the bound scales like ``gamma^2`` and underflows to 0
    once ``|gamma|`` drops below about ``1e-154``.
    """
    if not beta_r > beta_l:
        raise ValueError("the lower bound needs beta_r > beta_l")
    delta = 0.5 * (beta_r - beta_l)
    e0 = np.cosh(delta) + np.cosh(0.5 * (beta_r + beta_l))
    d0, d1 = lower_bound_integrals(delta)
    if gamma == 0:
        return float(4 * d1 / e0)
    co = coefficients(gamma)
    return float(2 * co.b * d0 / ((co.a + co.b + co.c) * e0))


def entropy_production(flux, beta_l: float, beta_r: float) -> float:
    """``sigma = (beta_r - beta_l) J``; accepts a :class:`FluxResult` or a bare flux value."""
    J = flux.J if isinstance(flux, FluxResult) else flux
    return float((beta_r - beta_l) * J)


def localized(x: int, hole: bool = False, coeff: complex = 1.0) -> dict[tuple[int, int], complex]:
    """The doubled vector ``coeff (delta_x + 0)`` (or ``coeff (0 + delta_x)``) as a sparse dict."""
    return {(x, 1 if hole else 0): complex(coeff)}


def _images(F: Mapping[tuple[int, int], complex], gamma: float, a: int):
    out = []
    for (x, block), c in F.items():
        img = wave_apply_hole(gamma, x, a) if block else wave_apply(gamma, x, a)
        out.append((c, img))
    return out


def _evaluate(images: list[tuple[complex, WaveImage]], k: np.ndarray):
    p = np.zeros_like(k, dtype=complex)
    h = np.zeros_like(k, dtype=complex)
    for c, img in images:
        p += c * img.particle(k)
        h += c * img.hole(k)
    return p, h


def ness_ac_two_point(gamma: float, config: LatticeConfig, F, G, nodes: int = 512) -> complex:
    """``(W_gamma F, S W_gamma G)`` with ``S`` the XY two-point operator.

    The bond and the temperatures are read from ``config``; its ``gamma``
    and truncation are not used.  ``F`` and ``G`` are finite combinations of
    localized vectors (see :func:`localized`).  In momentum space ``S`` multiplies the particle
    component by ``s_{-beta_l,-beta_r}`` and the hole component by
    ``s_{beta_r,beta_l}``; the integral is done by Gauss-Legendre on each
    half-zone, where the integrand is analytic.
    """
    a, beta_l, beta_r = config.a, config.beta_l, config.beta_r
    fi, gi = _images(F, gamma, a), _images(G, gamma, a)
    t, w = np.polynomial.legendre.leggauss(nodes)
    half = 0.5 * np.pi
    total = 0.0 + 0.0j
    for k in (half * (t - 1), half * (t + 1)):
        fp, fh = _evaluate(fi, k)
        gp, gh = _evaluate(gi, k)
        integrand = (
            np.conj(fp) * s_alpha_beta(-beta_l, -beta_r, k) * gp
            + np.conj(fh) * s_alpha_beta(beta_r, beta_l, k) * gh
        )
        total += half * np.sum(w * integrand)
    return complex(total / (2 * np.pi))


def flux_from_wave_operator(gamma: float, n: int, a: int, beta_l: float, beta_r: float,
                            nodes: int = 512) -> dict[str, float]:
    """Heat flux rebuilt from the wave-operator images at sample size ``n``, bond ``a``.

    Returns the particle and hole parts of ``tr(W* S W Phi)`` and ``J = -(J1 + J2)``;
    ``overlap`` is ``Im (W delta_{-(n+2)}, W delta_{-n})``, which must vanish.
    """
    x_far, x_near = -(n + 2), -n
    cfg = LatticeConfig(n, a, gamma, beta_l, beta_r, n + 3)
    J1 = 0.5 * ness_ac_two_point(gamma, cfg, localized(x_far), localized(x_near), nodes).imag
    J2 = 0.5 * ness_ac_two_point(gamma, cfg, localized(x_far, hole=True), localized(x_near, hole=True), nodes).imag
    # beta = 0 on both sides turns S into 1/2, so the plain overlap is twice that value
    flat = replace(cfg, beta_l=0.0, beta_r=0.0)
    overlap = 2 * ness_ac_two_point(gamma, flat, localized(x_far), localized(x_near), nodes).imag
    return {"J1": J1, "J2": J2, "J": -(J1 + J2), "overlap": overlap}


def _default_workers() -> int:
    env = os.environ.get("NESSXY_THREADS")
    if env:
        return max(1, int(env))
    return min(8, os.cpu_count() or 1)


def sweep(gammas, beta_l: float, beta_r: float, tol: float = DEFAULT_TOL,
          workers: int | None = None) -> list[FluxResult]:
    """One :class:`FluxResult` per anisotropy value, sorted by ``gamma``.

    Rows are independent; they are computed concurrently and the output does
    not depend on the number of workers.
    """
    gammas = sorted(float(g) for g in gammas)
    if not gammas:
        raise ValueError("empty gamma grid")
    workers = workers or _default_workers()
    if workers == 1:
        return [heat_flux(g, beta_l, beta_r, tol) for g in gammas]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda g: heat_flux(g, beta_l, beta_r, tol), gammas))
