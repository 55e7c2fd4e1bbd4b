"""Command-line entry point: solve | verify | eigencheck | evolve | onepoint.

Exit codes: 0 ok, 2 solver failure, 3 verification failure, 4 I/O or file
format error, 5 usage error.  Identical flags produce byte-identical output
files: summation orders are fixed and no wall-clock data enters any payload.
"""
from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from .core import ModelParams, SolverError, validate_configuration
from .basis import DEFAULT_LAMBDA_VARIANT, LAMBDA_VARIANTS
from .completeness import format_report, identity_report
from .dynamics import one_point_profile_naive, wavefunction
from .fastpoint import one_point_fast_profile
from .hamiltonian import eigen_residual
from .solver import (
    ContinuationPlan,
    enumerate_spectrum,
    read_spectrum,
    seed_displacement,
    write_spectrum,
)

CSV_HEADER = "# bethe-ring v1"

EXIT_OK = 0
EXIT_SOLVER = 2
EXIT_VERIFY = 3
EXIT_IO = 4
EXIT_USAGE = 5


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _fmt(v: float) -> str:
    return f"{v:.17g}"


def _parse_sites(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(v) for v in text.split(","))
    except ValueError as exc:
        raise UsageError(f"bad site list {text!r}: {exc}") from exc


def _parse_tgrid(text: str) -> np.ndarray:
    parts = text.split(":")
    if len(parts) != 3:
        raise UsageError(f"bad t-grid {text!r}: expected start:stop:count")
    try:
        start, stop, count = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError as exc:
        raise UsageError(f"bad t-grid {text!r}: {exc}") from exc
    if count < 1:
        raise UsageError("t-grid count must be at least 1")
    return np.linspace(start, stop, count)


def _load_spectrum(path: str):
    try:
        return read_spectrum(path)
    except OSError:
        raise
    except Exception as exc:
        raise OSError(f"malformed spectrum file {path}: {exc}") from exc


def cmd_solve(args) -> int:
    params = ModelParams(args.L, args.N, args.delta, solver_tol=args.tol)
    plan = ContinuationPlan(delta_target=args.delta, delta_step=args.step,
                            max_sweeps=args.max_sweeps)
    spectrum = enumerate_spectrum(plan, params, threads=args.threads)
    write_spectrum(spectrum, args.out)
    worst = max(r.residual for r in spectrum.roots)
    moved = max(seed_displacement(r, params) for r in spectrum.roots)
    line = (f"solved L={params.L} N={params.N} delta={params.delta:+g}: "
            f"{len(spectrum.roots)} classes, max residual {worst:.3e}, "
            f"max seed displacement {moved:.3e} -> {args.out}")
    if params.even_length:
        line += "  [warning: even L is outside the validated odd-ring regime]"
    print(line)
    return EXIT_OK


def cmd_verify(args) -> int:
    spectrum = _load_spectrum(args.spectrum)
    tol = args.tol if args.tol is not None else (
        1e-10 if spectrum.params.delta == 0 else 1e-7)
    try:
        doc = identity_report(spectrum, tol=tol, variant=args.variant)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    print(format_report(doc))
    if args.report:
        with open(args.report, "w", encoding="utf-8") as fh:
            json.dump(doc, fh, indent=1, sort_keys=True)
            fh.write("\n")
    return EXIT_OK if doc["pass"] else EXIT_VERIFY


def cmd_eigencheck(args) -> int:
    spectrum = _load_spectrum(args.spectrum)
    params = spectrum.params
    worst = 0.0
    bad = 0
    print(f"{'seed':<18} {'residual':<12} {'eigen-residual'}")
    for root in spectrum.roots:
        r = eigen_residual(root, params)
        worst = max(worst, r)
        flag = ""
        if r > args.tol:
            bad += 1
            flag = "  <-- exceeds tol"
        print(f"{str(root.seed_index):<18} {root.residual:<12.3e} {r:.3e}{flag}")
    print(f"worst eigen-residual {worst:.3e} (tol {args.tol:.1e})")
    return EXIT_OK if bad == 0 else EXIT_VERIFY


def cmd_evolve(args) -> int:
    spectrum = _load_spectrum(args.spectrum)
    params = spectrum.params
    y = validate_configuration(_parse_sites(args.y), params)
    ts = _parse_tgrid(args.t_grid)
    from .core import enumerate_configurations

    configs = enumerate_configurations(params)
    lines = [CSV_HEADER, "t,config,re,im,prob"]
    for t in ts:
        psi = wavefunction(float(t), y, spectrum)
        for cfg, amp in zip(configs, psi.amplitudes):
            label = "|".join(str(s) for s in cfg)
            lines.append(f"{_fmt(t)},{label},{_fmt(amp.real)},{_fmt(amp.imag)},"
                         f"{_fmt(abs(amp) ** 2)}")
    with open(args.out, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")
    print(f"evolved {len(ts)} time points x {len(configs)} configurations -> {args.out}")
    return EXIT_OK


def cmd_onepoint(args) -> int:
    spectrum = _load_spectrum(args.spectrum)
    params = spectrum.params
    try:
        y = validate_configuration(_parse_sites(args.y), params)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    ts = _parse_tgrid(args.t_grid)
    want_naive = args.method in ("naive", "both")
    want_fast = args.method in ("fast", "both")
    naive = fast = None
    diag: dict = {"method": args.method, "y": list(y),
                  "params": {"L": params.L, "N": params.N, "delta": params.delta},
                  "fallback_pairs": None, "max_imag_residue": None,
                  "max_abs_diff": None}
    if want_naive:
        naive = np.array([one_point_profile_naive(float(t), y, spectrum) for t in ts])
    if want_fast:
        fast, fdiag = one_point_fast_profile([float(t) for t in ts], y, spectrum)
        diag["fallback_pairs"] = fdiag["fallback_pairs"]
        diag["max_imag_residue"] = fdiag["max_imag_residue"]
    if want_naive and want_fast:
        diag["max_abs_diff"] = float(np.max(np.abs(naive - fast)))
    lines = [CSV_HEADER, "x,t,rho_naive,rho_fast"]
    for it, t in enumerate(ts):
        for x in range(params.L):
            col_n = _fmt(naive[it, x]) if want_naive else ""
            col_f = _fmt(fast[it, x]) if want_fast else ""
            lines.append(f"{x},{_fmt(t)},{col_n},{col_f}")
    with open(args.out, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")
    with open(args.out + ".diag.json", "w", encoding="utf-8") as fh:
        json.dump(diag, fh, indent=1, sort_keys=True)
        fh.write("\n")
    msg = f"one-point profile: {len(ts)} time points x {params.L} sites -> {args.out}"
    if diag["max_abs_diff"] is not None:
        msg += f" (max |naive - fast| = {diag['max_abs_diff']:.3e})"
    print(msg)
    return EXIT_OK


def build_parser() -> _Parser:
    p = _Parser(prog="bethe-ring",
                description="Spectrum, completeness check, and one-point "
                            "function for the periodic anisotropic spin ring.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("solve", help="enumerate all root classes and write a spectrum file")
    s.add_argument("-L", type=int, required=True, help="ring length")
    s.add_argument("-N", type=int, required=True, help="up-spin count")
    s.add_argument("--delta", type=float, required=True, help="anisotropy")
    s.add_argument("--step", type=float, default=0.02, help="continuation step (default 0.02)")
    s.add_argument("--max-sweeps", type=int, default=500)
    s.add_argument("--tol", type=float, default=1e-10, help="final residual tolerance")
    s.add_argument("--threads", type=int, default=os.cpu_count(),
                   help="worker cap for independent seeds (output is deterministic)")
    s.add_argument("--out", default="spectrum.json")
    s.set_defaults(func=cmd_solve)

    v = sub.add_parser("verify", help="check the transition-matrix identity")
    v.add_argument("--spectrum", required=True)
    v.add_argument("--tol", type=float, default=None,
                   help="identity tolerance (default 1e-10 at delta=0, else 1e-7)")
    v.add_argument("--variant", choices=list(LAMBDA_VARIANTS), default=DEFAULT_LAMBDA_VARIANT)
    v.add_argument("--report", default=None, help="write the JSON report here")
    v.set_defaults(func=cmd_verify)

    e = sub.add_parser("eigencheck", help="per-root eigen-equation residuals")
    e.add_argument("--spectrum", required=True)
    e.add_argument("--tol", type=float, default=1e-8)
    e.set_defaults(func=cmd_eigencheck)

    w = sub.add_parser("evolve", help="time-evolve a deterministic start; per-configuration CSV")
    w.add_argument("--spectrum", required=True)
    w.add_argument("-y", required=True, help="start configuration, comma-separated sites")
    w.add_argument("--t-grid", required=True, help="start:stop:count")
    w.add_argument("--out", default="evolve.csv")
    w.set_defaults(func=cmd_evolve)

    o = sub.add_parser("onepoint", help="occupation probability over sites and times")
    o.add_argument("--spectrum", required=True)
    o.add_argument("-y", required=True, help="start configuration, comma-separated sites")
    o.add_argument("--t-grid", required=True, help="start:stop:count")
    o.add_argument("--method", choices=["naive", "fast", "both"], default="naive")
    o.add_argument("--out", default="onepoint.csv")
    o.set_defaults(func=cmd_onepoint)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SolverError as exc:
        print(f"solver error: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO
    except ValueError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
