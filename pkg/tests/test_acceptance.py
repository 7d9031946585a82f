"""The twelve acceptance criteria at their stated tolerances and runtime budgets.

Each test prints one ``PASS``/``FAIL`` line straight to the terminal, so the
summary is visible under plain ``pytest -v`` without ``-s``.
"""
import time

import pytest

from nessxy import verification as ver


@pytest.fixture
def report(capsys):
    def emit(number, fn, budget, *args):
        start = time.perf_counter()
        res = fn(*args)
        res.seconds = time.perf_counter() - start
        with capsys.disabled():
            print(f"\n[criterion {number:2d}] {res.line()}")
        assert res.passed, f"{res.name}: value {res.value:.3e} vs tol {res.tol:.1e} {res.detail or ''}"
        assert res.seconds <= budget, f"{res.name} took {res.seconds:.1f}s (budget {budget}s)"
        return res
    return emit


def test_01_denominator_identity(report):
    report(1, ver.check_denominator_identity, 1.0)


def test_02_interaction_inverse(report):
    report(2, ver.check_interaction_inverse, 1.0)


def test_03_flux_evenness(report):
    report(3, ver.check_flux_evenness, 1.0)


def test_04_second_law_sandwich(report):
    report(4, ver.check_second_law, 10.0)


def test_05_dominance(report):
    report(5, ver.check_dominance, 10.0)


def test_06_oracle_equivalence(report):
    report(6, ver.check_oracle_equivalence, 20 * 60.0)


def test_07_first_law(report):
    # shares the cached reference runs of criterion 6
    report(7, ver.check_first_law, 20 * 60.0)


def test_08_wave_cross_validation(report):
    report(8, ver.check_wave_cross_validation, 10 * 60.0)


def test_09_resolvent_limit(report):
    report(9, ver.check_resolvent_limit, 10.0)


def test_10_pfaffian_engine(report):
    report(10, ver.check_pfaffian, 5.0, 0)


def test_11_flux_independence(report):
    report(11, ver.check_flux_independence, 30.0)


def test_12_pp_sector_vanishing(report):
    report(12, ver.check_pp_sector, 60.0)
