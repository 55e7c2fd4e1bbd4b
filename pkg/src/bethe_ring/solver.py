"""Root enumeration: closed-form seeds at delta = 0, row-wise projected
Newton sweeps, and stepwise continuation in the anisotropy.

The residual system is
    F_i(xi) = xi_i^L + (-1)^N prod_j (1 + xi_i xi_j - 2 d xi_i) / (1 + xi_i xi_j - 2 d xi_j)
which vanishes exactly on solutions of the coupled equations; at delta = 0 it
decouples to xi_i^L = (-1)^(N-1).  One sweep applies, for each equation in
turn, the minimal-norm update
    xi <- xi - (F_i(xi) / ||J_i(xi)||^2) * conj(J_i(xi))
with J_i the holomorphic gradient row of F_i (complex extension of the
real-vector recursion; ||J||^2 = sum_k |dF_i/dxi_k|^2).
"""
from __future__ import annotations

import cmath
import itertools
import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .core import (
    DEDUP_TOL,
    AssumptionViolationError,
    ContinuationError,
    DegenerateJacobianError,
    DuplicateClassError,
    ModelParams,
    RootTuple,
    SpectralSet,
    canonicalize,
    check_assumption,
    check_pairwise_distinct,
    class_distance,
    cpow,
    find_duplicate_classes,
)

JACOBIAN_NORM_TOL = 1e-14


@dataclass(frozen=True)
class ContinuationPlan:
    """Stepping schedule for walking the anisotropy from 0 to its target."""

    delta_target: float
    delta_step: float = 0.02
    max_sweeps: int = 500
    per_step_tol: float = 1e-12

    def __post_init__(self):
        if self.delta_step <= 0:
            raise ValueError("delta_step must be positive")
        if self.max_sweeps < 1:
            raise ValueError("max_sweeps must be at least 1")
        if self.per_step_tol <= 0:
            raise ValueError("per_step_tol must be positive")

    def steps(self) -> list[float]:
        """The sequence of anisotropy values visited, ending at the target."""
        target = self.delta_target
        count = max(1, math.ceil(abs(target) / self.delta_step))
        return [target * (k / count) for k in range(1, count + 1)] if target != 0 else []


def seed_entry(k: int, params: ModelParams) -> complex:
    """Decoupled-point solution: exp(2 pi i k / L) for N odd,
    exp(pi i (2k+1) / L) for N even."""
    if params.N % 2 == 1:
        return cmath.exp(2j * math.pi * k / params.L)
    return cmath.exp(1j * math.pi * (2 * k + 1) / params.L)


def seed_roots(k: tuple[int, ...], params: ModelParams) -> RootTuple:
    """Seed tuple for a strictly increasing index tuple k in [0,L)^N."""
    k = tuple(int(v) for v in k)
    if len(k) != params.N:
        raise ValueError(f"seed index {k} has length {len(k)}, expected N={params.N}")
    if any(not 0 <= v < params.L for v in k):
        raise ValueError(f"seed index {k} outside [0,{params.L})")
    if any(a >= b for a, b in zip(k, k[1:])):
        raise ValueError(f"seed index {k} must be strictly increasing (repeats give a zero vector)")
    entries = tuple(seed_entry(v, params) for v in k)
    at_zero = ModelParams(params.L, params.N, 0.0, params.solver_tol, params.identity_tol)
    return RootTuple(entries=entries, residual=residual_norm(entries, at_zero), seed_index=k)


def _ratio_product(entries: tuple[complex, ...], i: int, delta: float) -> complex:
    """prod_{j != i} (1 + xi_i xi_j - 2 d xi_i) / (1 + xi_i xi_j - 2 d xi_j).

    A factor with numerator identical to its denominator (always the case at
    delta = 0) is removable and contributes 1 even where both vanish; this is
    what lets even rings through at the decoupled point.
    """
    out = 1.0 + 0.0j
    xi_i = entries[i]
    for j, xi_j in enumerate(entries):
        if j == i:
            continue
        num = 1.0 + xi_i * xi_j - 2.0 * delta * xi_i
        den = 1.0 + xi_i * xi_j - 2.0 * delta * xi_j
        if num == den:
            continue
        if abs(den) <= 1e-300:
            raise AssumptionViolationError(
                f"vanishing residual denominator for entry pair ({i},{j})")
        out *= num / den
    return out


def residual_component(entries: tuple[complex, ...], i: int, params: ModelParams) -> complex:
    sign = -1.0 if params.N % 2 else 1.0
    return cpow(entries[i], params.L) + sign * _ratio_product(entries, i, params.delta)


def bethe_residual(xi, params: ModelParams) -> np.ndarray:
    """All N residual components; zero exactly on solutions."""
    entries = xi.entries if isinstance(xi, RootTuple) else tuple(complex(e) for e in xi)
    return np.array([residual_component(entries, i, params) for i in range(params.N)])


def residual_norm(entries, params: ModelParams) -> float:
    return float(np.max(np.abs(bethe_residual(entries, params))))


def jacobian_row(entries: tuple[complex, ...], i: int, params: ModelParams) -> np.ndarray:
    """Holomorphic gradient row (dF_i/dxi_1, ..., dF_i/dxi_N)."""
    N, L, d = params.N, params.L, params.delta
    sign = -1.0 if N % 2 else 1.0
    xi_i = entries[i]
    P = _ratio_product(entries, i, d)
    row = np.zeros(N, dtype=complex)
    diag = L * cpow(xi_i, L - 1)
    for k, xi_k in enumerate(entries):
        if k == i:
            continue
        num = 1.0 + xi_i * xi_k - 2.0 * d * xi_i
        den = 1.0 + xi_i * xi_k - 2.0 * d * xi_k
        if num == den:
            continue  # removable factor: identically 1, zero derivative
        row[k] = sign * P * (xi_i / num - (xi_i - 2.0 * d) / den)
        diag += sign * P * ((xi_k - 2.0 * d) / num - xi_k / den)
    row[i] = diag
    return row


def bethe_jacobian(xi, params: ModelParams) -> np.ndarray:
    entries = xi.entries if isinstance(xi, RootTuple) else tuple(complex(e) for e in xi)
    return np.array([jacobian_row(entries, i, params) for i in range(params.N)])


def kaczmarz_sweep(xi: RootTuple, params: ModelParams) -> RootTuple:
    """One full sweep i = 1..N of the row-projected update; refreshed residual."""
    entries = list(xi.entries)
    for i in range(params.N):
        tup = tuple(entries)
        F_i = residual_component(tup, i, params)
        J_i = jacobian_row(tup, i, params)
        norm2 = float(np.sum(np.abs(J_i) ** 2))
        if math.sqrt(norm2) < JACOBIAN_NORM_TOL:
            raise DegenerateJacobianError(
                f"gradient row {i} has norm {math.sqrt(norm2):.3e} < {JACOBIAN_NORM_TOL:.0e}")
        step = (F_i / norm2) * np.conj(J_i)
        for k in range(params.N):
            entries[k] -= complex(step[k])
    new = tuple(entries)
    return RootTuple(entries=new, residual=residual_norm(new, params), seed_index=xi.seed_index)


def _refine_at(entries: tuple[complex, ...], seed: tuple[int, ...],
               params: ModelParams, plan: ContinuationPlan) -> RootTuple:
    root = RootTuple(entries=entries, residual=residual_norm(entries, params), seed_index=seed)
    for _ in range(plan.max_sweeps):
        if root.residual <= plan.per_step_tol:
            return root
        root = kaczmarz_sweep(root, params)
    if root.residual <= plan.per_step_tol:
        return root
    raise ContinuationError(
        f"seed {seed}: no convergence at delta={params.delta:+.6g} after "
        f"{plan.max_sweeps} sweeps (residual {root.residual:.3e})")


def solve_from_seed(k: tuple[int, ...], plan: ContinuationPlan, params: ModelParams) -> RootTuple:
    """Walk the anisotropy from 0 to plan.delta_target, sweeping to tolerance
    at each step; the final tuple re-checks pairwise distinctness and the
    assumption bound at the target anisotropy."""
    if abs(plan.delta_target - params.delta) > 1e-15:
        raise ValueError("plan.delta_target must equal params.delta")
    seedrt = seed_roots(k, params)
    entries = seedrt.entries
    for d in plan.steps():
        step_params = ModelParams(params.L, params.N, d, params.solver_tol, params.identity_tol)
        entries = _refine_at(entries, seedrt.seed_index, step_params, plan).entries
    final = RootTuple(entries=canonicalize(entries),
                      residual=residual_norm(entries, params),
                      seed_index=seedrt.seed_index)
    check_pairwise_distinct(final.entries, DEDUP_TOL)
    if params.L % 2 == 1:
        # The interaction-factor bound is only promised on odd rings; even
        # rings are accepted with downstream operations failing loudly when
        # a vanishing factor is actually divided by.
        check_assumption(final.entries, params.delta)
    if final.residual > params.solver_tol:
        raise ContinuationError(
            f"seed {k}: final residual {final.residual:.3e} exceeds solver_tol")
    return final


def seed_displacement(root: RootTuple, params: ModelParams) -> float:
    """Entry-matching distance between a solved root and its seed tuple."""
    seed = tuple(seed_entry(v, params) for v in root.seed_index)
    return class_distance(root.entries, seed)


def enumerate_spectrum(plan: ContinuationPlan, params: ModelParams,
                       threads: int | None = None) -> SpectralSet:
    """Solve from every strictly increasing seed tuple; assert exactly
    C(L,N) pairwise-distinct classes.  Seeds may be solved concurrently;
    assembly order is the seed lexicographic order regardless."""
    seeds = list(itertools.combinations(range(params.L), params.N))

    def run(k):
        try:
            return solve_from_seed(k, plan, params)
        except Exception as exc:
            raise type(exc)(f"seed {k}: {exc}") from exc

    if threads and threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            roots = list(pool.map(run, seeds))
    else:
        roots = [run(k) for k in seeds]
    dup = find_duplicate_classes([r.entries for r in roots])
    if dup is not None:
        raise DuplicateClassError(
            f"seeds {roots[dup[0]].seed_index} and {roots[dup[1]].seed_index} "
            f"converged to the same class")
    return SpectralSet(params=params, roots=tuple(roots))


# --- persistence --------------------------------------------------------------

def spectrum_to_dict(spectrum: SpectralSet) -> dict:
    p = spectrum.params
    return {
        "params": {"L": p.L, "N": p.N, "delta": p.delta},
        "roots": [
            {
                "seed": list(r.seed_index),
                "entries": [[e.real, e.imag] for e in r.entries],
                "residual": r.residual,
            }
            for r in spectrum.roots
        ],
    }


def spectrum_from_dict(doc: dict, solver_tol: float = 1e-10,
                       identity_tol: float = 1e-7) -> SpectralSet:
    p = doc["params"]
    params = ModelParams(int(p["L"]), int(p["N"]), float(p["delta"]),
                         solver_tol=solver_tol, identity_tol=identity_tol)
    roots = tuple(
        RootTuple(
            entries=tuple(complex(re, im) for re, im in r["entries"]),
            residual=float(r["residual"]),
            seed_index=tuple(int(v) for v in r["seed"]),
        )
        for r in doc["roots"]
    )
    return SpectralSet(params=params, roots=roots)


def write_spectrum(spectrum: SpectralSet, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(spectrum_to_dict(spectrum), fh, indent=1)
        fh.write("\n")


def read_spectrum(path, solver_tol: float = 1e-10) -> SpectralSet:
    with open(path, "r", encoding="utf-8") as fh:
        return spectrum_from_dict(json.load(fh), solver_tol=solver_tol)
