"""Time evolution from deterministic initial configurations.

Amplitudes are spectral sums: psi_t(x) = sum_roots ell(y, xi) u(xi, x)
exp(-i t E(xi)).  For a fixed start y the ell*u products are computed once
per root and cached; the time sweep then costs one matrix-vector product per
time point.  Time is dimensionless (hbar = 1).
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .core import (
    Configuration,
    ModelParams,
    SpectralSet,
    WaveFunction,
    enumerate_configurations,
    validate_configuration,
)
from .basis import DEFAULT_LAMBDA_VARIANT, ell_row, energy, u_row


@dataclass(frozen=True)
class SpectralTable:
    """Per-root data for one start configuration: weights ell(y, xi),
    forward rows u(xi, .), and energies."""

    params: ModelParams
    weights: np.ndarray   # (R,)
    umat: np.ndarray      # (R, C)
    energies: np.ndarray  # (R,)


@lru_cache(maxsize=8)
def spectral_table(spectrum: SpectralSet, y: Configuration,
                   variant: str = DEFAULT_LAMBDA_VARIANT) -> SpectralTable:
    params = spectrum.params
    y = validate_configuration(y, params)
    configs = np.array(enumerate_configurations(params), dtype=np.int64)
    yarr = np.array([y], dtype=np.int64)
    R, C = len(spectrum.roots), len(configs)
    weights = np.empty(R, dtype=complex)
    umat = np.empty((R, C), dtype=complex)
    energies = np.empty(R, dtype=complex)
    for r, root in enumerate(spectrum.roots):
        weights[r] = ell_row(root, yarr, params.delta, params.L, variant)[0]
        umat[r] = u_row(root, configs, params.delta)
        energies[r] = energy(root, params.delta)
    return SpectralTable(params=params, weights=weights, umat=umat, energies=energies)


def wavefunction(t: float, y: Configuration, spectrum: SpectralSet) -> WaveFunction:
    """State at time t started from the basis vector of configuration y."""
    tab = spectral_table(spectrum, tuple(int(v) for v in y))
    coeff = tab.weights * np.exp(-1j * t * tab.energies)
    return WaveFunction(params=tab.params, amplitudes=coeff @ tab.umat)


def config_probability(t: float, y: Configuration, x: Configuration,
                       spectrum: SpectralSet) -> float:
    """Born-rule probability of measuring configuration x at time t."""
    from .core import config_rank

    psi = wavefunction(t, y, spectrum)
    r = config_rank(x, spectrum.params)
    return float(np.abs(psi.amplitudes[r]) ** 2)


@lru_cache(maxsize=8)
def site_membership(params: ModelParams) -> np.ndarray:
    """(L, C) boolean mask: mask[s, j] iff site s is occupied in config j."""
    configs = enumerate_configurations(params)
    mask = np.zeros((params.L, len(configs)), dtype=bool)
    for j, c in enumerate(configs):
        for s in c:
            mask[s, j] = True
    return mask


def one_point_profile_naive(t: float, y: Configuration,
                            spectrum: SpectralSet) -> np.ndarray:
    """Up-spin occupation probability at every site (direct summation)."""
    psi = wavefunction(t, y, spectrum)
    probs = np.abs(psi.amplitudes) ** 2
    return site_membership(spectrum.params) @ probs


def one_point_naive(x: int, t: float, y: Configuration,
                    spectrum: SpectralSet) -> float:
    """Probability of an up-spin at site x at time t (direct summation over
    the C(L-1, N-1) configurations containing x)."""
    L = spectrum.params.L
    if not 0 <= int(x) < L:
        raise ValueError(f"site {x} outside [0,{L})")
    return float(one_point_profile_naive(t, y, spectrum)[int(x)])
