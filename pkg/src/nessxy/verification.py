"""Acceptance checks shared by ``nessxy verify`` and the test suite.

Each check returns a :class:`CheckResult` carrying the measured worst-case
value next to its tolerance, so a failure reports by how much it missed.
Checks marked ``heavy`` need truncated-lattice eigensolves of dimension
several thousand and are skipped in fast mode.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable

import numpy as np

from . import flux, lattice, oracle, pfaffian, scattering
from .momentum import DEFAULT_GRID, momentum_grid

__all__ = [
    "CheckResult",
    "CHECKS",
    "ORACLE_CONFIGS",
    "REFERENCE",
    "run_checks",
]

# (gamma, beta_l, beta_r) compared against the closed form
ORACLE_CONFIGS = ((0.0, 1.0, 2.0), (1.0, 1.0, 2.0), (2.0, 1.0, 2.0))
# sample half-width, bond, and the two (trunc, T) resolutions
REFERENCE = {"n": 2, "a": 0, "fine": (600, 200.0), "coarse": (300, 100.0)}


@dataclass
class CheckResult:
    name: str
    passed: bool
    value: float
    tol: float
    seconds: float = 0.0
    detail: dict = field(default_factory=dict)

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"{status}  {self.name:<28s} value={self.value:.3e}  tol={self.tol:.1e}  ({self.seconds:.1f}s)"


def _q_poly(gamma: float, s):
    co = flux.coefficients(gamma)
    s2 = s * s
    return co.a * s2 * s2 + co.b * s2 + co.c


def check_denominator_identity() -> CheckResult:
    k = momentum_grid(DEFAULT_GRID, exclude=(-np.pi, 0.0, np.pi))
    worst = 0.0
    for g in (0.3, 1.0, 2.0, 3.7):
        lhs = np.abs(scattering.d_gamma(g, k)) ** 2 * np.sin(k) ** 4
        q = _q_poly(g, np.sin(k))
        worst = max(worst, float(np.max(np.abs(lhs - q) / (1 + q))))
    return CheckResult("denominator_identity", worst <= 1e-12, worst, 1e-12)


def check_interaction_inverse() -> CheckResult:
    worst = 0.0
    for g in np.linspace(-4, 4, 50):
        for e in np.linspace(-0.98, 0.98, 50):
            A = scattering.interaction_matrix(g, e)
            Ainv = scattering.interaction_inverse(g, e)
            worst = max(worst, float(np.max(np.abs(A @ Ainv - np.eye(4)))))
    return CheckResult("interaction_inverse", worst <= 1e-12, worst, 1e-12)


def check_flux_evenness() -> CheckResult:
    worst = max(abs(flux.heat_flux(g, 1, 2).J - flux.heat_flux(-g, 1, 2).J) for g in (0.5, 1.7, 3.0))
    return CheckResult("flux_evenness", worst <= 1e-13, worst, 1e-13)


@lru_cache(maxsize=1)
def _reference_sweep():
    return tuple(flux.sweep(np.linspace(-4, 4, 161), 1.0, 2.0))


def check_second_law() -> CheckResult:
    rows = _reference_sweep()
    # worst violation of lower <= J <= 1/2 and 0 < sigma <= 1/2; <= 0 means satisfied
    worst = -np.inf
    for r in rows:
        worst = max(worst, r.lower_bound - r.J, r.J - r.upper_bound, r.sigma - 0.5, -r.sigma)
    ok = worst <= 0 and all(r.sigma > 0 for r in rows)
    return CheckResult("second_law_sandwich", ok, float(worst), 0.0, detail={"rows": len(rows)})


def check_dominance() -> CheckResult:
    rows = _reference_sweep()
    j0 = flux.heat_flux(0.0, 1.0, 2.0).J
    margin = max(r.J - j0 for r in rows if r.gamma != 0)
    return CheckResult("dominance", margin < 0, float(margin), 0.0)


@lru_cache(maxsize=None)
def _oracle_run(gamma: float, beta_l: float, beta_r: float, trunc: int, T: float) -> oracle.OracleRun:
    cfg = lattice.LatticeConfig(REFERENCE["n"], REFERENCE["a"], gamma, beta_l, beta_r, trunc)
    return oracle.ergodic_flux(cfg, T)


def check_oracle_equivalence() -> CheckResult:
    worst, halving, detail = 0.0, True, {}
    for g, bl, br in ORACLE_CONFIGS:
        closed = flux.heat_flux(g, bl, br).J
        fine = abs(_oracle_run(g, bl, br, *REFERENCE["fine"]).J_num - closed)
        coarse = abs(_oracle_run(g, bl, br, *REFERENCE["coarse"]).J_num - closed)
        worst = max(worst, fine)
        halving &= coarse > fine
        detail[f"gamma={g:g}"] = {"fine": fine, "coarse": coarse}
    return CheckResult("oracle_equivalence", worst <= 5e-3 and halving, worst, 5e-3, detail=detail)


def check_first_law() -> CheckResult:
    detail = {}
    for g, bl, br in ORACLE_CONFIGS:
        detail[f"gamma={g:g}"] = _oracle_run(g, bl, br, *REFERENCE["fine"]).first_law_residual
    worst = max(detail.values())
    return CheckResult("first_law", worst <= 1e-4, worst, 1e-4, detail=detail)


def check_wave_cross_validation() -> CheckResult:
    gamma, x, a = 0.8, -5, 0
    k, p, h, spread = oracle.numerical_wave_apply(gamma, x, a, T=200.0, trunc=800)
    img = scattering.wave_apply(gamma, x, a)
    dist = float(np.sqrt(np.mean(np.abs(p - img.particle(k)) ** 2 + np.abs(h - img.hole(k)) ** 2)))
    return CheckResult("wave_cross_validation", dist <= 1e-2, dist, 1e-2, detail={"spread": spread})


def check_resolvent_limit() -> CheckResult:
    x = np.array([0, 1, 2])
    exact = np.array([scattering.alpha(0.3, int(xi)) for xi in x])
    err_coarse = np.abs(oracle.numerical_resolvent(0.3, 1e-2, x, 10_000) - exact)
    err_fine = np.abs(oracle.numerical_resolvent(0.3, 1e-3, x, 10_000) - exact)
    ratios = err_coarse / err_fine
    # first order in eps: a tenfold smaller eps gives a roughly tenfold smaller error
    first_order = bool(np.all((ratios > 5) & (ratios < 20)))
    worst = float(np.max(err_fine))
    return CheckResult("resolvent_limit", worst <= 1e-2 and first_order, worst, 1e-2,
                       detail={"ratios": ratios.tolist()})


def check_pfaffian(seed: int = 0) -> CheckResult:
    rng = np.random.default_rng(seed)
    worst = 0.0
    for dim in range(2, 12, 2):
        for _ in range(50):
            m = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
            ref = pfaffian.pfaffian_bruteforce(m)
            worst = max(worst, abs(pfaffian.pfaffian(m) - ref) / max(abs(ref), 1e-300))
    det_worst = 0.0
    for dim in range(2, 22, 2):
        m = pfaffian.antisymmetrize_upper(rng.standard_normal((dim, dim)))
        det = np.linalg.det(m)
        det_worst = max(det_worst, abs(pfaffian.pfaffian(m) ** 2 - det) / max(abs(det), 1.0))
    ok = worst <= 1e-10 and det_worst <= 1e-9
    return CheckResult("pfaffian_engine", ok, worst, 1e-10, detail={"pf2_vs_det": det_worst})


def check_flux_independence() -> CheckResult:
    worst, detail = 0.0, {}
    for g in (0.0, 1.0, 2.0):
        closed = flux.heat_flux(g, 1.0, 2.0).J
        for n, a in ((2, 0), (5, -3), (8, 4)):
            diff = abs(flux.flux_from_wave_operator(g, n, a, 1.0, 2.0)["J"] - closed)
            detail[f"gamma={g:g},n={n},a={a}"] = diff
            worst = max(worst, diff)
    return CheckResult("flux_independence", worst <= 1e-8, worst, 1e-8, detail=detail)


def check_pp_sector() -> CheckResult:
    worst = oracle.pp_flux_check(3.0, 200, n=REFERENCE["n"], a=REFERENCE["a"])
    return CheckResult("pp_sector_vanishing", worst <= 1e-10, worst, 1e-10)


def check_lattice_structure() -> CheckResult:
    cfg = lattice.LatticeConfig(2, 0, 1.3, 1.0, 2.0, 20)
    sym = lattice.check_symmetries(20)
    # the shift leaves the truncated lattice at its ends, so only interior rows count
    worst = max(v for k, v in sym.items() if k != "shift_boundary")
    ok = (
        lattice.is_hamiltonian(lattice.build_H_gamma(cfg.gamma, cfg.a, cfg.trunc))
        and lattice.is_two_point(lattice.build_S_d(cfg))
        and worst <= 1e-12
    )
    return CheckResult("lattice_structure", ok, worst, 1e-12)


# (name, function, heavy)
CHECKS: tuple[tuple[str, Callable[[], CheckResult], bool], ...] = (
    ("denominator_identity", check_denominator_identity, False),
    ("interaction_inverse", check_interaction_inverse, False),
    ("flux_evenness", check_flux_evenness, False),
    ("second_law_sandwich", check_second_law, False),
    ("dominance", check_dominance, False),
    ("oracle_equivalence", check_oracle_equivalence, True),
    ("first_law", check_first_law, True),
    ("wave_cross_validation", check_wave_cross_validation, True),
    ("resolvent_limit", check_resolvent_limit, False),
    ("pfaffian_engine", check_pfaffian, False),
    ("flux_independence", check_flux_independence, False),
    ("pp_sector_vanishing", check_pp_sector, False),
    ("lattice_structure", check_lattice_structure, False),
)


def run_checks(fast: bool = False, seed: int = 0, names=None) -> list[CheckResult]:
    """Run the registered checks in order; ``fast`` skips the heavy ones."""
    out = []
    for name, fn, heavy in CHECKS:
        if (fast and heavy) or (names is not None and name not in names):
            continue
        start = time.perf_counter()
        res = fn(seed) if fn is check_pfaffian else fn()
        res.seconds = time.perf_counter() - start
        out.append(res)
    return out
