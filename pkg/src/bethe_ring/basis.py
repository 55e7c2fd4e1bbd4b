"""Coordinate <-> energy transformation kernels.

The forward transform writes a candidate eigenvector over the configuration
basis through symmetrized plane waves with interaction amplitudes; the inverse
transform expresses a configuration basis vector over those eigenvectors using
the determinant of an N x N normalization matrix.

Permutation sums are evaluated directly and are O(N!); N <= 8 is enforced.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import numpy as np

from .core import (
    ASSUMPTION_TOL,
    MAX_PERMUTATION_N,
    AssumptionViolationError,
    RootTuple,
    cpow,
)

# Two conventions for the anisotropy inside the normalization matrix: the
# source text prints delta ("literal") where every other interaction factor
# carries 2*delta ("doubled").  The completeness identity check is the
# arbiter; "doubled" is the convention under which the identity holds at
# delta != 0 (see completeness.select_lambda_variant) and is the recorded
# default.
LAMBDA_VARIANTS = ("literal", "doubled")
DEFAULT_LAMBDA_VARIANT = "doubled"


@dataclass(frozen=True)
class PermutationTable:
    """All permutations of {0..n-1} with cached signs, in itertools order."""

    n: int
    perms: tuple[tuple[int, ...], ...]
    signs: tuple[int, ...]


def _sign(perm: Sequence[int]) -> int:
    inv = 0
    for i in range(len(perm)):
        for j in range(i + 1, len(perm)):
            if perm[i] > perm[j]:
                inv += 1
    return -1 if inv % 2 else 1


@lru_cache(maxsize=None)
def permutation_table(n: int) -> PermutationTable:
    if n > MAX_PERMUTATION_N:
        raise ValueError(f"permutation sums limited to N <= {MAX_PERMUTATION_N}, got N={n}")
    perms = tuple(itertools.permutations(range(n)))
    return PermutationTable(n, perms, tuple(_sign(p) for p in perms))


def entries_of(xi) -> tuple[complex, ...]:
    """Accept a RootTuple or any sequence of complex numbers."""
    if isinstance(xi, RootTuple):
        return xi.entries
    return tuple(complex(e) for e in xi)


def cross_term(a: complex, b: complex, delta: float) -> complex:
    """The interaction factor 1 + a*b - 2*delta*a."""
    return 1.0 + a * b - 2.0 * delta * a


def amplitude(sigma: Sequence[int], xi, delta: float) -> complex:
    """Interaction amplitude of one permutation.

    Product over inversions (i < j with sigma(i) > sigma(j)) of
    -cross(x_{s(i)}, x_{s(j)}) / cross(x_{s(j)}, x_{s(i)}); the identity
    permutation gives 1, and at delta = 0 every factor is -1 so the
    amplitude reduces to the permutation sign.
    """
    x = entries_of(xi)
    out = 1.0 + 0.0j
    for i in range(len(x)):
        for j in range(i + 1, len(x)):
            if sigma[i] > sigma[j]:
                num = cross_term(x[sigma[i]], x[sigma[j]], delta)
                den = cross_term(x[sigma[j]], x[sigma[i]], delta)
                if abs(num) <= ASSUMPTION_TOL or abs(den) <= ASSUMPTION_TOL:
                    raise AssumptionViolationError(
                        f"vanishing interaction factor for entry pair ({sigma[i]},{sigma[j]})")
                out *= -num / den
    return out


def u_coeff(xi, x: Sequence[int], delta: float) -> complex:
    """Forward coefficient: sum over permutations of amplitude * plane wave.

    Defined for any integer tuple x (negative exponents invert the entries).
    Vanishes identically when two entries of xi coincide.
    """
    ent = entries_of(xi)
    table = permutation_table(len(ent))
    total = 0.0 + 0.0j
    for sigma in table.perms:
        term = amplitude(sigma, ent, delta)
        for i, e in enumerate(x):
            term *= cpow(ent[sigma[i]], int(e))
        total += term
    return total


def energy(xi, delta: float) -> complex:
    """Eigenvalue sum_i (xi_i + 1/xi_i - 2*delta); real for spectrum roots."""
    ent = entries_of(xi)
    return sum(e + 1.0 / e - 2.0 * delta for e in ent)


def _lambda_delta(delta: float, variant: str) -> float:
    if variant not in LAMBDA_VARIANTS:
        raise ValueError(f"variant must be one of {LAMBDA_VARIANTS}, got {variant!r}")
    return delta if variant == "literal" else 2.0 * delta


def lambda_matrix(xi, L: int, delta: float,
                  variant: str = DEFAULT_LAMBDA_VARIANT) -> tuple[np.ndarray, complex]:
    """Normalization matrix and its determinant.

    Off-diagonal (i != j) entries
        -d' (1 + xi_j^2 - d' xi_j) / ((1 + xi_i xi_j - d' xi_i)(1 + xi_i xi_j - d' xi_j))
    with d' = delta ("literal") or 2*delta ("doubled"); diagonal
    L/xi_i - sum of the off-diagonal row.  Determinant via partial-pivot LU.
    """
    ent = entries_of(xi)
    dd = _lambda_delta(delta, variant)
    n = len(ent)
    M = np.zeros((n, n), dtype=complex)
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            den1 = 1.0 + ent[i] * ent[j] - dd * ent[i]
            den2 = 1.0 + ent[i] * ent[j] - dd * ent[j]
            if abs(den1) <= ASSUMPTION_TOL or abs(den2) <= ASSUMPTION_TOL:
                raise AssumptionViolationError(
                    f"vanishing normalization-matrix denominator at ({i},{j})")
            M[i, j] = -dd * (1.0 + ent[j] ** 2 - dd * ent[j]) / (den1 * den2)
    for i in range(n):
        M[i, i] = L / ent[i] - (M[i].sum() - M[i, i])
    det = complex(np.linalg.det(M))
    scale = float(np.prod(np.abs(M).max(axis=1)))
    if abs(det) < 1e-13 * max(scale, 1.0):
        raise ZeroDivisionError(
            f"normalization matrix is numerically singular: |det| = {abs(det):.3e}")
    return M, det


def ell_coeff(x: Sequence[int], xi, delta: float, L: int,
              variant: str = DEFAULT_LAMBDA_VARIANT) -> complex:
    """Inverse coefficient: sum over permutations of
    1 / (amplitude * det(Lambda) * prod_i xi_{s(i)}^(x_i + 1)).

    Defined on any integer tuple x; callers only pass ordered configurations.
    """
    ent = entries_of(xi)
    _, det = lambda_matrix(ent, L, delta, variant)
    table = permutation_table(len(ent))
    total = 0.0 + 0.0j
    for sigma in table.perms:
        denom = amplitude(sigma, ent, delta) * det
        for i, e in enumerate(x):
            denom *= cpow(ent[sigma[i]], int(e) + 1)
        total += 1.0 / denom
    return total


# --- vectorized rows over the whole configuration list -----------------------
#
# The transition matrix, dynamics, and the figure-scale runs evaluate u and
# ell for one root against every configuration; these helpers do that with
# cumulative power tables instead of per-configuration scalar powers.

def power_table(entries: Sequence[complex], max_exp: int) -> np.ndarray:
    """P[i, v] = entries[i]**v for v = 0..max_exp (cumulative products)."""
    ent = np.asarray(entries, dtype=complex)
    P = np.empty((ent.size, max_exp + 1), dtype=complex)
    P[:, 0] = 1.0
    for v in range(1, max_exp + 1):
        P[:, v] = P[:, v - 1] * ent
    return P


def u_row(xi, configs: np.ndarray, delta: float) -> np.ndarray:
    """u for one root against an (C, N) integer array of configurations."""
    ent = entries_of(xi)
    n = len(ent)
    table = permutation_table(n)
    P = power_table(ent, int(configs.max()) if configs.size else 0)
    out = np.zeros(configs.shape[0], dtype=complex)
    for sigma in table.perms:
        term = np.full(configs.shape[0], amplitude(sigma, ent, delta), dtype=complex)
        for i in range(n):
            term *= P[sigma[i], configs[:, i]]
        out += term
    return out


def ell_row(xi, configs: np.ndarray, delta: float, L: int,
            variant: str = DEFAULT_LAMBDA_VARIANT) -> np.ndarray:
    """ell for one root against an (C, N) integer array of configurations."""
    ent = entries_of(xi)
    n = len(ent)
    _, det = lambda_matrix(ent, L, delta, variant)
    table = permutation_table(n)
    inv = tuple(1.0 / e for e in ent)
    Pinv = power_table(inv, (int(configs.max()) if configs.size else 0) + 1)
    out = np.zeros(configs.shape[0], dtype=complex)
    for sigma in table.perms:
        term = np.full(configs.shape[0],
                       1.0 / (amplitude(sigma, ent, delta) * det), dtype=complex)
        for i in range(n):
            term *= Pinv[sigma[i], configs[:, i] + 1]
        out += term
    return out
