"""Transition-matrix identity check: the inverse transform against the
forward transform must resolve the identity on the configuration basis.

M[y][x] = sum over root classes of ell(y, xi) * u(xi, x); completeness of the
root set is certified by M being the identity matrix to tolerance.  The root
sum uses compensated (Kahan) accumulation in spectrum order so deviations are
the experiment's signal rather than summation noise.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import (
    KahanSum,
    ModelParams,
    RootTuple,
    SpectralSet,
    WaveFunction,
    ZeroBetheVectorError,
    enumerate_configurations,
)
from .basis import DEFAULT_LAMBDA_VARIANT, LAMBDA_VARIANTS, ell_row, u_row


def bethe_vector(xi: RootTuple, params: ModelParams) -> WaveFunction:
    """Unnormalized candidate eigenvector over all configurations."""
    configs = np.array(enumerate_configurations(params), dtype=np.int64)
    amps = u_row(xi, configs, params.delta)
    if float(np.linalg.norm(amps)) < 1e-12:
        raise ZeroBetheVectorError(
            f"vector for root with seed {xi.seed_index} vanishes identically")
    return WaveFunction(params=params, amplitudes=amps)


def transition_matrix(spectrum: SpectralSet,
                      variant: str = DEFAULT_LAMBDA_VARIANT) -> np.ndarray:
    """Entry (rank(y), rank(x)) = sum over roots of ell(y, xi) u(xi, x)."""
    params = spectrum.params
    configs = np.array(enumerate_configurations(params), dtype=np.int64)
    acc = KahanSum(shape=(len(configs), len(configs)))
    for root in spectrum.roots:
        try:
            lcol = ell_row(root, configs, params.delta, params.L, variant)
            urow = u_row(root, configs, params.delta)
        except Exception as exc:
            raise type(exc)(f"root with seed {root.seed_index}: {exc}") from exc
        acc.add(np.outer(lcol, urow))
    return acc.total


@dataclass(frozen=True)
class IdentityReport:
    max_offdiag: float
    max_diag_dev: float
    passed: bool
    argmax_offdiag: tuple[int, int]
    argmax_diag: int


def verify_identity(M: np.ndarray, tol: float) -> IdentityReport:
    """Largest off-diagonal modulus and diagonal deviation from 1, with the
    worst locations for diagnosis."""
    M = np.asarray(M)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {M.shape}")
    off = np.abs(M - np.diag(np.diag(M)))
    diag = np.abs(np.diag(M) - 1.0)
    i, j = np.unravel_index(int(np.argmax(off)), off.shape)
    k = int(np.argmax(diag))
    max_off = float(off[i, j])
    max_diag = float(diag[k])
    return IdentityReport(
        max_offdiag=max_off,
        max_diag_dev=max_diag,
        passed=bool(max_off <= tol and max_diag <= tol),
        argmax_offdiag=(int(i), int(j)),
        argmax_diag=k,
    )


def select_lambda_variant(spectrum: SpectralSet,
                          tol: float | None = None) -> tuple[str, dict[str, float]]:
    """Run the identity under both anisotropy conventions for the
    normalization matrix; return the winner and both deviations."""
    tol = spectrum.params.identity_tol if tol is None else tol
    deviations = {}
    for variant in LAMBDA_VARIANTS:
        rep = verify_identity(transition_matrix(spectrum, variant), tol)
        deviations[variant] = max(rep.max_offdiag, rep.max_diag_dev)
    winner = min(deviations, key=deviations.get)
    return winner, deviations


def identity_report(spectrum: SpectralSet, tol: float | None = None,
                    variant: str = DEFAULT_LAMBDA_VARIANT,
                    both_variants: bool = True) -> dict:
    """JSON-ready completeness report.  Odd ring length is required here;
    the numerical validity claim does not extend to even rings."""
    params = spectrum.params
    if params.even_length:
        raise ValueError(
            f"completeness verification requires odd L (got L={params.L}); "
            "even rings are outside the validated regime")
    tol = params.identity_tol if tol is None else tol
    rep = verify_identity(transition_matrix(spectrum, variant), tol)
    doc = {
        "params": {"L": params.L, "N": params.N, "delta": params.delta},
        "variant": variant,
        "tol": tol,
        "max_offdiag": rep.max_offdiag,
        "max_diag_dev": rep.max_diag_dev,
        "pass": rep.passed,
        "argmax_offdiag": list(rep.argmax_offdiag),
        "argmax_diag": rep.argmax_diag,
    }
    if both_variants:
        other = [v for v in LAMBDA_VARIANTS if v != variant][0]
        orep = verify_identity(transition_matrix(spectrum, other), tol)
        doc["variants"] = {
            variant: max(rep.max_offdiag, rep.max_diag_dev),
            other: max(orep.max_offdiag, orep.max_diag_dev),
        }
    return doc


def format_report(doc: dict) -> str:
    p = doc["params"]
    lines = [
        f"completeness check  L={p['L']} N={p['N']} delta={p['delta']:+g}  "
        f"variant={doc['variant']}",
        f"  max off-diagonal  {doc['max_offdiag']:.3e}  at {tuple(doc['argmax_offdiag'])}",
        f"  max diagonal dev  {doc['max_diag_dev']:.3e}  at row {doc['argmax_diag']}",
        f"  tolerance {doc['tol']:.1e}  ->  {'PASS' if doc['pass'] else 'FAIL'}",
    ]
    if "variants" in doc:
        per = "  ".join(f"{k}: {v:.3e}" for k, v in doc["variants"].items())
        lines.append(f"  variant deviations  {per}")
    return "\n".join(lines)
