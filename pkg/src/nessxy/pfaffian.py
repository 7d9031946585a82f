"""Pfaffians and quasifree many-point functions.

Only the strict upper triangle of the input matrix is read; the lower
triangle is regenerated as the negated transpose.  This is how the pairing
sum reads the matrix ``[(Gamma F_i, S F_j)]``, which is not antisymmetric on
its own.
"""

from __future__ import annotations

import numpy as np

from .lattice import apply_gamma

__all__ = [
    "MAX_BRUTEFORCE_DIM",
    "antisymmetrize_upper",
    "pairings",
    "crossing_number",
    "permutation_sign",
    "pfaffian_bruteforce",
    "pfaffian",
    "quasifree_2m_point",
]

MAX_BRUTEFORCE_DIM = 12
PIVOT_RTOL = 1e-13


def antisymmetrize_upper(m) -> np.ndarray:
    """Keep the strict upper triangle and set ``M[j, i] = -M[i, j]``."""
    m = np.asarray(m)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    upper = np.triu(m, k=1)
    return upper - upper.T


def pairings(items):
    """All perfect matchings of ``items`` as lists of ordered pairs ``(i, j)``, ``i < j``.

    Pairs are listed by increasing first element, the canonical order of the
    pairing sum.
    """
    items = list(items)
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for idx, partner in enumerate(rest):
        for tail in pairings(rest[:idx] + rest[idx + 1:]):
            yield [(first, partner)] + tail


def crossing_number(pairing) -> int:
    """Number of crossing arcs when the pairs are drawn above the points ``0..2m-1``."""
    count = 0
    for p in range(len(pairing)):
        i, j = pairing[p]
        for q in range(p + 1, len(pairing)):
            k, l = pairing[q]
            if i < k < j < l or k < i < l < j:
                count += 1
    return count


def permutation_sign(perm) -> int:
    """Signature of a permutation given as a sequence, via inversion count."""
    perm = list(perm)
    inv = sum(1 for i in range(len(perm)) for j in range(i + 1, len(perm)) if perm[i] > perm[j])
    return -1 if inv % 2 else 1


def pfaffian_bruteforce(m, check_sign: bool = False) -> complex:
    """Pairing sum ``sum_pi sign(pi) prod A_{pi(2i-1), pi(2i)}``.

    The sign of each pairing is ``(-1)^I`` with ``I`` its crossing number;
    ``check_sign`` additionally asserts agreement with the permutation
    signature.
    """
    A = antisymmetrize_upper(m)
    dim = A.shape[0]
    if dim % 2:
        raise ValueError(f"Pfaffian needs an even dimension, got {dim}")
    if dim > MAX_BRUTEFORCE_DIM:
        raise ValueError(f"pairing sum limited to dim <= {MAX_BRUTEFORCE_DIM}, got {dim}")
    total = 0.0 + 0.0j
    for pairing in pairings(range(dim)):
        sign = -1 if crossing_number(pairing) % 2 else 1
        if check_sign:
            flat = [i for pair in pairing for i in pair]
            if permutation_sign(flat) != sign:
                raise AssertionError(f"crossing sign disagrees with signature for {pairing}")
        term = complex(sign)
        for i, j in pairing:
            term *= A[i, j]
        total += term
    return total


def pfaffian(m) -> complex:
    """Pfaffian by skew-symmetric Gaussian elimination with pivoting (Parlett-Reid).

    ``O(dim^3)``.  A pivot column whose largest entry falls below
    ``PIVOT_RTOL`` times the matrix scale is treated as zero and the result
    is exactly 0.
    """
    A = antisymmetrize_upper(m).astype(complex)
    dim = A.shape[0]
    if dim % 2:
        raise ValueError(f"Pfaffian needs an even dimension, got {dim}")
    if dim == 0:
        return 1.0 + 0.0j
    scale = np.max(np.abs(A))
    if scale == 0:
        return 0.0 + 0.0j
    result = 1.0 + 0.0j
    for k in range(0, dim - 1, 2):
        p = k + 1 + int(np.argmax(np.abs(A[k + 1:, k])))
        if p != k + 1:
            A[[k + 1, p], :] = A[[p, k + 1], :]
            A[:, [k + 1, p]] = A[:, [p, k + 1]]
            result = -result
        pivot = A[k + 1, k]
        if abs(pivot) <= PIVOT_RTOL * scale:
            return 0.0 + 0.0j
        result *= A[k, k + 1]
        if k + 2 < dim:
            tau = A[k, k + 2:] / A[k, k + 1]
            # rank-2 update of the trailing block keeps it antisymmetric
            A[k + 2:, k + 2:] += np.outer(tau, A[k + 2:, k + 1]) - np.outer(A[k + 2:, k + 1], tau)
    return result


def quasifree_2m_point(S, *vectors, brute_force: bool = False) -> complex:
    """``omega(B(F_1) ... B(F_2m)) = pf([(Gamma F_i, S F_j)])`` for a quasifree state."""
    if len(vectors) % 2 or not vectors:
        raise ValueError("need a nonzero even number of vectors")
    S = np.asarray(S)
    F = np.column_stack([np.asarray(v) for v in vectors])
    if F.shape[0] != S.shape[0]:
        raise ValueError(f"vector length {F.shape[0]} does not match S of size {S.shape[0]}")
    GF = np.column_stack([apply_gamma(F[:, i]) for i in range(F.shape[1])])
    M = GF.conj().T @ S @ F
    return pfaffian_bruteforce(M) if brute_force else pfaffian(M)
