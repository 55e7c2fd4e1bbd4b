"""Shared domain types for the periodic XXZ chain in a fixed up-spin sector.

Conventions used throughout the package:
  * sites are indexed 0..L-1 on a ring,
  * a configuration is a strictly increasing tuple of the N up-spin sites,
  * configurations are ordered lexicographically (rank 0 = (0,1,...,N-1)),
  * a root tuple is an N-tuple of nonzero complex numbers, considered up to
    permutation of its entries; the canonical representative sorts entries
    by (argument in [0,2pi), modulus).
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from math import comb
from typing import Iterable, Sequence

import numpy as np

Configuration = tuple[int, ...]

# Tolerance governing when two root classes (or two entries of one tuple)
# count as equal; solver residuals sit near 1e-12, leaving two orders margin.
DEDUP_TOL = 1e-8
# Minimum modulus of the interaction denominators 1 + xi_i xi_j - 2 delta xi_i.
ASSUMPTION_TOL = 1e-10
# Permutation sums are O(N!); refuse beyond this.
MAX_PERMUTATION_N = 8


class BetheRingError(Exception):
    """Base class for all package errors."""


class AssumptionViolationError(BetheRingError):
    """An interaction factor 1 + xi_i xi_j - 2 delta xi_i is (numerically) zero."""


class ZeroBetheVectorError(BetheRingError):
    """The assembled coordinate-space vector vanishes identically."""


class SolverError(BetheRingError):
    """Base class for root-finding failures."""


class DegenerateJacobianError(SolverError):
    """A gradient row of the residual system has (numerically) zero norm."""


class ContinuationError(SolverError):
    """The anisotropy continuation stalled before reaching its target."""


class DegenerateRootError(SolverError):
    """Two entries of a root tuple collided within DEDUP_TOL."""


class DuplicateClassError(SolverError):
    """Two seeds produced the same root class; seed <-> root bijection lost."""


class IKSingularityError(BetheRingError):
    """A determinant-kernel denominator 1 - xi_i zeta_j is (numerically) zero."""

    def __init__(self, i: int, j: int, value: complex):
        super().__init__(f"near-singular pair: |1 - xi[{i}] * zeta[{j}]| = {abs(value):.3e}")
        self.pair = (i, j)
        self.value = value


@dataclass(frozen=True)
class ModelParams:
    """Model parameters: ring length L, up-spin count N, anisotropy delta.

    L odd is required by the completeness-verification entry points; even L
    is accepted elsewhere (``even_length`` acts as the warning flag).
    """

    L: int
    N: int
    delta: float
    solver_tol: float = 1e-10
    identity_tol: float = 1e-7

    def __post_init__(self):
        if self.L < 1:
            raise ValueError(f"L must be a positive integer, got {self.L}")
        if not 1 <= self.N <= self.L:
            raise ValueError(f"need 1 <= N <= L, got N={self.N}, L={self.L}")
        if self.solver_tol <= 0 or self.identity_tol <= 0:
            raise ValueError("tolerances must be positive")

    @property
    def even_length(self) -> bool:
        return self.L % 2 == 0

    @property
    def sector_dim(self) -> int:
        return comb(self.L, self.N)


@dataclass(frozen=True)
class RootTuple:
    """One representative of a root class: entries, residual, and the
    Fourier-mode indices of the decoupled-point seed it was continued from."""

    entries: tuple[complex, ...]
    residual: float
    seed_index: tuple[int, ...]

    def __post_init__(self):
        if any(e == 0 for e in self.entries):
            raise ValueError("root entries must be nonzero")
        if self.residual < 0:
            raise ValueError("residual must be nonnegative")
        if len(self.seed_index) != len(self.entries):
            raise ValueError("seed_index length must match entries")

    def __len__(self) -> int:
        return len(self.entries)


@dataclass(frozen=True)
class SpectralSet:
    """The complete collection of C(L,N) root classes for one ModelParams."""

    params: ModelParams
    roots: tuple[RootTuple, ...]

    def __post_init__(self):
        expect = self.params.sector_dim
        if len(self.roots) != expect:
            raise ValueError(f"expected {expect} root classes, got {len(self.roots)}")
        worst = max((r.residual for r in self.roots), default=0.0)
        if worst > self.params.solver_tol:
            raise ValueError(f"root residual {worst:.3e} exceeds solver_tol {self.params.solver_tol:.1e}")
        dup = find_duplicate_classes([r.entries for r in self.roots])
        if dup is not None:
            raise DuplicateClassError(f"root classes {dup[0]} and {dup[1]} coincide within {DEDUP_TOL:.0e}")


@dataclass
class WaveFunction:
    """Dense complex amplitudes over the lexicographic configuration basis."""

    params: ModelParams
    amplitudes: np.ndarray
    normalized: bool = False

    def __post_init__(self):
        self.amplitudes = np.asarray(self.amplitudes, dtype=complex)
        if self.amplitudes.shape != (self.params.sector_dim,):
            raise ValueError(
                f"amplitude count {self.amplitudes.shape} does not match sector dimension "
                f"{self.params.sector_dim}")
        if self.normalized and abs(self.norm() ** 2 - 1.0) > 1e-10:
            raise ValueError("normalized flag set but |amplitudes| is not 1")

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))


def enumerate_configurations(params: ModelParams) -> list[Configuration]:
    """All strictly increasing N-tuples over [0,L) in lexicographic order."""
    return list(itertools.combinations(range(params.L), params.N))


def validate_configuration(x: Sequence[int], params: ModelParams) -> Configuration:
    x = tuple(int(v) for v in x)
    if len(x) != params.N:
        raise ValueError(f"configuration {x} has {len(x)} sites, expected N={params.N}")
    if any(not 0 <= v < params.L for v in x):
        raise ValueError(f"configuration {x} has sites outside [0,{params.L})")
    if any(a >= b for a, b in zip(x, x[1:])):
        raise ValueError(f"configuration {x} is not strictly increasing")
    return x


def config_rank(x: Sequence[int], params: ModelParams) -> int:
    """Position of x in the lexicographic enumeration (combinadic ranking)."""
    x = validate_configuration(x, params)
    L, N = params.L, params.N
    rank = 0
    prev = -1
    for i, c in enumerate(x):
        for v in range(prev + 1, c):
            rank += comb(L - 1 - v, N - 1 - i)
        prev = c
    return rank


def config_unrank(rank: int, params: ModelParams) -> Configuration:
    """Inverse of config_rank."""
    L, N = params.L, params.N
    if not 0 <= rank < params.sector_dim:
        raise ValueError(f"rank {rank} outside [0,{params.sector_dim})")
    sites = []
    v = 0
    remaining = rank
    for i in range(N):
        while True:
            below = comb(L - 1 - v, N - 1 - i)
            if remaining < below:
                break
            remaining -= below
            v += 1
        sites.append(v)
        v += 1
    return tuple(sites)


def _angle_key(z: complex) -> tuple[float, float]:
    theta = math.atan2(z.imag, z.real) % (2.0 * math.pi)
    return (theta, abs(z))


def canonicalize(entries: Iterable[complex]) -> tuple[complex, ...]:
    """Canonical class representative: entries sorted by (argument, modulus)."""
    return tuple(sorted((complex(e) for e in entries), key=_angle_key))


def check_assumption(entries: Sequence[complex], delta: float, tol: float = ASSUMPTION_TOL) -> None:
    """Abort if any interaction factor 1 + xi_i xi_j - 2 delta xi_i is near zero."""
    for i, a in enumerate(entries):
        for j, b in enumerate(entries):
            val = 1.0 + a * b - 2.0 * delta * a
            if abs(val) <= tol:
                raise AssumptionViolationError(
                    f"|1 + xi[{i}]*xi[{j}] - 2*delta*xi[{i}]| = {abs(val):.3e} <= {tol:.1e}")


def check_pairwise_distinct(entries: Sequence[complex], tol: float = DEDUP_TOL) -> None:
    for i in range(len(entries)):
        for j in range(i + 1, len(entries)):
            if abs(entries[i] - entries[j]) <= tol:
                raise DegenerateRootError(
                    f"entries {i} and {j} coincide: |diff| = {abs(entries[i] - entries[j]):.3e}")


def class_distance(a: Sequence[complex], b: Sequence[complex]) -> float:
    """Order-insensitive distance between two root classes: the symmetric
    Hausdorff max over entries.  Faithful as a multiset metric because the
    entries within each tuple are pairwise separated (enforced elsewhere)."""
    A = np.asarray(tuple(a), dtype=complex)
    B = np.asarray(tuple(b), dtype=complex)
    d = np.abs(A[:, None] - B[None, :])
    return float(max(d.min(axis=1).max(), d.min(axis=0).max()))


def find_duplicate_classes(all_entries: Sequence[Sequence[complex]],
                           tol: float = DEDUP_TOL) -> tuple[int, int] | None:
    """Return indices of the first pair of tuples equal as multisets (else None).

    Uses the symmetric Hausdorff distance so the result does not depend on
    entry order or on the angle-sort branch cut.
    """
    if len(all_entries) < 2:
        return None
    arr = np.array([tuple(e) for e in all_entries], dtype=complex)
    n, N = arr.shape
    block = max(1, 2 ** 21 // max(1, n * N * N))
    for start in range(0, n, block):
        stop = min(start + block, n)
        # (b, n, N, N) pairwise entry distances between tuple blocks
        d = np.abs(arr[start:stop, None, :, None] - arr[None, :, None, :])
        haus = np.maximum(d.min(axis=3).max(axis=2), d.min(axis=2).max(axis=2))
        close = haus <= tol
        for a in range(start, stop):
            close[a - start, : a + 1] = False
        hits = np.argwhere(close)
        if hits.size:
            a, b = hits[0]
            return (int(a) + start, int(b))
    return None


def cpow(z: complex, n: int) -> complex:
    """z**n for integer n via binary exponentiation (negative n inverts)."""
    if n < 0:
        return 1.0 / cpow(z, -n)
    out = 1.0 + 0.0j
    base = complex(z)
    while n:
        if n & 1:
            out *= base
        base *= base
        n >>= 1
    return out


def _neumaier_step(total, comp, term):
    t = total + term
    big = np.abs(total) >= np.abs(term)
    comp = comp + np.where(big, (total - t) + term, (term - t) + total)
    return t, comp


class KahanSum:
    """Compensated (Kahan-Neumaier) accumulator, elementwise on scalars or
    ndarrays; real and imaginary parts carry separate compensation."""

    def __init__(self, shape=None):
        zero = 0.0 if shape is None else np.zeros(shape, dtype=float)
        self._tr, self._cr = zero, zero
        self._ti, self._ci = (zero, zero) if shape is None else (zero.copy(), zero.copy())

    def add(self, term):
        term = np.asarray(term, dtype=complex) if not np.isscalar(term) else complex(term)
        self._tr, self._cr = _neumaier_step(self._tr, self._cr, np.real(term))
        self._ti, self._ci = _neumaier_step(self._ti, self._ci, np.imag(term))
        return self

    @property
    def total(self):
        return (self._tr + self._cr) + 1j * (self._ti + self._ci)
