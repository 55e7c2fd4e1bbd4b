"""Shared fixtures and independent oracles.

The oracles here intentionally share no code path with the package: the
residual is evaluated straight from the coupled-equation definition with
builtin powers, and the dense Hamiltonian is assembled from the two-site
block acting on spin bitstrings, then restricted to the fixed-N sector.
"""
from __future__ import annotations

import itertools
from functools import lru_cache

import numpy as np

from bethe_ring import ContinuationPlan, ModelParams, enumerate_spectrum


@lru_cache(maxsize=None)
def get_spectrum(L: int, N: int, delta: float):
    params = ModelParams(L, N, delta)
    return enumerate_spectrum(ContinuationPlan(delta_target=delta), params)


def oracle_residual(entries, L, N, delta):
    """Independent substitution check of the coupled equations:
    xi_i^L - (-1)^(N-1) * prod_j (1 + xi_i xi_j - 2 d xi_i)/(1 + xi_i xi_j - 2 d xi_j)."""
    out = []
    for i in range(N):
        rhs = (-1.0) ** (N - 1)
        for j in range(N):
            rhs *= (1 + entries[i] * entries[j] - 2 * delta * entries[i]) / (
                1 + entries[i] * entries[j] - 2 * delta * entries[j])
        out.append(entries[i] ** L - rhs)
    return max(abs(v) for v in out)


def oracle_dense_h(L: int, N: int, delta: float) -> np.ndarray:
    """Sector Hamiltonian from the two-site block on the 2^L spin space.

    Bit s of a basis index is the spin at site s; for every periodic bond
    (i, i+1) the block contributes -delta on anti-aligned pairs and a unit
    amplitude for swapping them.  Rows/columns are restricted to the
    lexicographic configuration order.
    """
    dim = 1 << L
    H = np.zeros((dim, dim), dtype=complex)
    for i in range(L):
        j = (i + 1) % L
        for b in range(dim):
            bi = (b >> i) & 1
            bj = (b >> j) & 1
            if bi != bj:
                H[b, b] += -delta
                H[b ^ (1 << i) ^ (1 << j), b] += 1.0
    configs = list(itertools.combinations(range(L), N))
    idx = [sum(1 << s for s in c) for c in configs]
    return H[np.ix_(idx, idx)]


def random_unimodularish(rng, n, lo=0.7, hi=1.3):
    """Random complex tuple with moduli in [lo, hi], entries well separated."""
    while True:
        z = rng.uniform(lo, hi, n) * np.exp(2j * np.pi * rng.uniform(0, 1, n))
        if all(abs(z[i] - z[j]) > 0.1 for i in range(n) for j in range(i + 1, n)):
            return tuple(z)
