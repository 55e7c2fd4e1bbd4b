"""Sector Hamiltonian of the anisotropic chain, defined by rule.

Action on a configuration basis vector: unit-amplitude hops of one up-spin to
an adjacent empty site (periodic, both directions) plus a diagonal term
-delta * (number of anti-aligned adjacent bonds).  This matches the local
two-site block with hop amplitude 1 and diagonal -delta on mixed spin pairs,
and reproduces E(xi) = sum(xi + 1/xi - 2*delta) on the candidate eigenvectors.
"""
from __future__ import annotations

from functools import lru_cache

import numpy as np

from .core import (
    ModelParams,
    RootTuple,
    WaveFunction,
    ZeroBetheVectorError,
    config_rank,
    enumerate_configurations,
)
from .basis import energy, u_row


@lru_cache(maxsize=None)
def _hop_table(L: int, N: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Directed hop index pairs (src, dst) and per-configuration counts of
    anti-aligned bonds; cached per sector."""
    params = ModelParams(L, N, 0.0)
    configs = enumerate_configurations(params)
    src: list[int] = []
    dst: list[int] = []
    anti = np.zeros(len(configs), dtype=np.int64)
    for j, c in enumerate(configs):
        occ = set(c)
        anti[j] = sum(1 for s in range(L) if (s in occ) != ((s + 1) % L in occ))
        for s in c:
            for s2 in ((s + 1) % L, (s - 1) % L):
                if s2 not in occ:
                    moved = tuple(sorted((occ - {s}) | {s2}))
                    src.append(j)
                    dst.append(config_rank(moved, params))
    return np.asarray(src, dtype=np.int64), np.asarray(dst, dtype=np.int64), anti


def apply_hxxz(psi: WaveFunction) -> WaveFunction:
    """H applied to a sector wavefunction (pure; input untouched)."""
    p = psi.params
    src, dst, anti = _hop_table(p.L, p.N)
    out = (-p.delta * anti) * psi.amplitudes
    np.add.at(out, dst, psi.amplitudes[src])
    return WaveFunction(params=p, amplitudes=out)


def dense_sector_matrix(params: ModelParams) -> np.ndarray:
    """The rule-based Hamiltonian as a dense C(L,N) x C(L,N) matrix."""
    src, dst, anti = _hop_table(params.L, params.N)
    dim = params.sector_dim
    H = np.zeros((dim, dim), dtype=complex)
    np.add.at(H, (dst, src), 1.0)
    H[np.arange(dim), np.arange(dim)] = -params.delta * anti
    return H


def bethe_vector_raw(xi: RootTuple, params: ModelParams) -> np.ndarray:
    configs = np.array(enumerate_configurations(params), dtype=np.int64)
    return u_row(xi, configs, params.delta)


def eigen_residual(xi: RootTuple, params: ModelParams) -> float:
    """Relative eigen-equation defect ||H v - E v|| / ||v|| of the candidate
    eigenvector assembled from the forward coefficients."""
    v = bethe_vector_raw(xi, params)
    nv = float(np.linalg.norm(v))
    if nv < 1e-12:
        raise ZeroBetheVectorError(
            f"candidate vector for seed {xi.seed_index} is numerically zero")
    psi = WaveFunction(params=params, amplitudes=v)
    hv = apply_hxxz(psi).amplitudes
    E = energy(xi, params.delta)
    return float(np.linalg.norm(hv - E * v) / nv)
