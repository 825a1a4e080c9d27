"""Command-line front end.

Subcommands:

* ``simulate``: Monte Carlo ensemble, one output row per checkpoint.
* ``moments``:  exact moment table (no randomness); appends the limiting
  mean row in the convergent regime.
* ``phase``:    classify one (alpha, gamma) point or sweep a grid.
* ``verify``:   run the acceptance suite and emit a JSON report.

Output is CSV (fixed header) or JSON lines (stable keys, one object per
row).  Every command honors ``--seed``; without it a fresh seed is drawn
and reported on stderr so the run can be reproduced.  Exit codes: 0 ok,
1 runtime or verification failure, 2 usage/config error.
"""

from __future__ import annotations

import argparse
import json
import secrets
import sys
from typing import Optional, Sequence

import numpy as np

from . import __version__
from .ensemble import (
    ResourceLimitError,
    geometric_checkpoints,
    run_ensemble,
    set_threads,
)
from .exact import NotConvergentRegimeError, limit_mean_S, moment_table
from .params import ParameterError, validate_params
from .regime import classify, gamma_c
from .verify import run_acceptance

SCHEMA_VERSION = "decaywalk.v1"

SIMULATE_COLUMNS = (
    "n", "mean_T", "var_T", "mean_S", "var_S", "min_S", "max_S", "mean_sign_changes",
)
MOMENTS_COLUMNS = ("n", "mean_T", "var_T", "m2_T", "mean_S", "var_S", "m2_S")
PHASE_COLUMNS = ("alpha", "gamma", "kind", "curve", "n_exponent", "log_exponent", "loglog_exponent")


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return format(value, ".17g")
    return str(value)


class _Writer:
    """Writes rows as CSV (fixed header) or JSON lines with stable keys."""

    def __init__(self, columns: Sequence[str], fmt: str, out):
        self.columns = tuple(columns)
        self.fmt = fmt
        self.out = out
        if fmt == "csv":
            print(",".join(self.columns), file=out)

    def row(self, values: dict) -> None:
        if self.fmt == "csv":
            print(",".join(_fmt(values.get(c)) for c in self.columns), file=self.out)
        else:
            obj = {"schema": SCHEMA_VERSION}
            for c in self.columns:
                v = values.get(c)
                obj[c] = v if not isinstance(v, float) else float(_fmt(v))
            print(json.dumps(obj), file=self.out)


def _read_config(path: str) -> dict[str, str]:
    """Flat key=value file mirroring the long flag names."""
    values: dict[str, str] = {}
    with open(path) as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected key=value, got {line!r}")
            key, _, val = line.partition("=")
            values[key.strip().replace("-", "_")] = val.strip()
    return values


def _parse_checkpoints(spec: Optional[str], n_max: int) -> list[int]:
    if spec is None:
        return geometric_checkpoints(n_max)
    parts = [int(p) for p in spec.split(",") if p.strip()]
    return sorted(set(parts))


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="flat key=value file; flags override it")
    parser.add_argument("--alpha", type=float, help="memory parameter in [-1, 1]")
    parser.add_argument("--beta", type=float, default=0.0, help="first-step bias in [-1, 1]")
    parser.add_argument("--gamma", type=float, help="step-decay exponent > 0")
    parser.add_argument("--n", type=int, default=10**4, help="path horizon n_max")
    parser.add_argument("--trials", type=int, default=1000)
    parser.add_argument("--seed", type=int, help="master seed (random + logged if omitted)")
    parser.add_argument("--checkpoints", help="comma-separated list; default 20 geometric points")
    parser.add_argument("--format", choices=("csv", "jsonl"), default="csv")
    parser.add_argument("--out", help="output path (default stdout)")
    parser.add_argument("--threads", type=int, help="numba worker cap")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="decaywalk",
        description="Memory walk with polynomially decaying steps: simulate, "
        "compute exact moments, classify regimes, verify.",
    )
    parser.add_argument("--version", action="version", version=f"decaywalk {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="Monte Carlo ensemble over checkpoints")
    _add_common(sim)

    mom = sub.add_parser("moments", help="exact moment table (deterministic)")
    _add_common(mom)
    mom.add_argument(
        "--limit",
        action="store_true",
        help="require the E[S_inf] series row (error outside the convergent regime)",
    )
    mom.add_argument("--limit-tol", type=float, default=1e-6)

    ph = sub.add_parser("phase", help="regime classification")
    _add_common(ph)
    ph.add_argument("--grid", type=int, help="sweep an NxN grid instead of one point")
    ph.add_argument("--eps", type=float, default=1e-9, help="on-curve detection width")

    ver = sub.add_parser("verify", help="run the acceptance suite")
    _add_common(ver)
    ver.add_argument("--quick", action="store_true", help="deterministic oracle subset (< 10 s)")
    return parser


def _apply_config(args: argparse.Namespace, argv: Sequence[str]) -> argparse.Namespace:
    if not args.config:
        return args
    file_values = _read_config(args.config)
    explicit = {a.lstrip("-").split("=")[0].replace("-", "_") for a in argv if a.startswith("--")}
    for key, raw in file_values.items():
        if key in explicit or not hasattr(args, key):
            continue
        current = getattr(args, key)
        if isinstance(current, bool):
            setattr(args, key, raw.lower() in ("1", "true", "yes"))
        elif key in ("alpha", "beta", "gamma", "eps", "limit_tol"):
            setattr(args, key, float(raw))
        elif key in ("n", "trials", "seed", "threads", "grid"):
            setattr(args, key, int(raw))
        else:
            setattr(args, key, raw)
    return args


def _model_params(args: argparse.Namespace):
    if args.alpha is None or args.gamma is None:
        raise ParameterError("--alpha and --gamma are required (flags or config file)")
    return validate_params(args.alpha, args.beta, args.gamma)


def _resolve_seed(args: argparse.Namespace) -> int:
    if args.seed is not None:
        return args.seed
    seed = secrets.randbits(63)
    print(f"decaywalk: no --seed given; using seed {seed}", file=sys.stderr)
    return seed


def _open_out(args: argparse.Namespace):
    if args.out:
        return open(args.out, "w")
    return sys.stdout


def cmd_simulate(args: argparse.Namespace) -> int:
    params = _model_params(args)
    seed = _resolve_seed(args)
    cps = _parse_checkpoints(args.checkpoints, args.n)
    result = run_ensemble(params, args.n, args.trials, checkpoints=cps, seed=seed)
    out = _open_out(args)
    try:
        writer = _Writer(SIMULATE_COLUMNS, args.format, out)
        for i, n in enumerate(result.checkpoints):
            t, s = result.stats["T"][i], result.stats["S"][i]
            writer.row({
                "n": int(n),
                "mean_T": t.mean, "var_T": t.variance,
                "mean_S": s.mean, "var_S": s.variance,
                "min_S": s.min, "max_S": s.max,
                "mean_sign_changes": result.stats["sign_changes"][i].mean,
            })
    finally:
        if out is not sys.stdout:
            out.close()
    return 0


def cmd_moments(args: argparse.Namespace) -> int:
    params = _model_params(args)
    cps = _parse_checkpoints(args.checkpoints, args.n)
    table = moment_table(params, cps)
    convergent = params.gamma > gamma_c(params.alpha)
    if args.limit and not convergent:
        print(
            f"decaywalk: E[S_inf] undefined: gamma={params.gamma} <= "
            f"gamma_c={gamma_c(params.alpha)}",
            file=sys.stderr,
        )
        return 2
    out = _open_out(args)
    try:
        writer = _Writer(MOMENTS_COLUMNS, args.format, out)
        for i, n in enumerate(table.checkpoints):
            writer.row({
                "n": int(n),
                "mean_T": float(table.mean_T[i]), "var_T": float(table.var_T[i]),
                "m2_T": float(table.m2_T[i]),
                "mean_S": float(table.mean_S[i]), "var_S": float(table.var_S[i]),
                "m2_S": float(table.m2_S[i]),
            })
        if convergent:
            value, terms = limit_mean_S(params, tol=args.limit_tol)
            if args.format == "csv":
                writer.row({"n": "inf", "mean_S": value})
            else:
                print(json.dumps({
                    "schema": SCHEMA_VERSION, "kind": "limit_mean_S",
                    "value": float(_fmt(value)), "tail_bound": args.limit_tol,
                    "terms": terms,
                }), file=out)
    finally:
        if out is not sys.stdout:
            out.close()
    return 0


def cmd_phase(args: argparse.Namespace) -> int:
    if not args.grid and (args.alpha is None or args.gamma is None):
        raise ParameterError("--alpha and --gamma are required for a point query")
    out = _open_out(args)
    try:
        writer = _Writer(PHASE_COLUMNS, args.format, out)

        def emit(a: float, g: float) -> None:
            lab = classify(a, g, args.eps)
            sc = lab.scaling
            writer.row({
                "alpha": a, "gamma": g,
                "kind": lab.kind.value, "curve": lab.curve,
                "n_exponent": None if sc is None else sc.n_exponent,
                "log_exponent": None if sc is None else sc.log_exponent,
                "loglog_exponent": None if sc is None else sc.loglog_exponent,
            })

        if args.grid:
            n = args.grid
            for a in np.linspace(-1.0, 1.0, n):
                for g in np.linspace(1.5 / n, 1.5, n):
                    emit(float(a), float(g))
        else:
            emit(args.alpha, args.gamma)
    finally:
        if out is not sys.stdout:
            out.close()
    return 0


def cmd_verify(args: argparse.Namespace) -> int:
    results = run_acceptance(quick=args.quick)
    for res in results:
        print(res.line())
    report = {
        "schema": SCHEMA_VERSION,
        "quick": bool(args.quick),
        "passed": all(r.passed for r in results),
        "criteria": [
            {
                "criterion": r.criterion, "name": r.name, "passed": r.passed,
                "detail": r.detail, "seconds": round(r.seconds, 3),
            }
            for r in results
        ],
    }
    if args.out:
        with open(args.out, "w") as fh:
            json.dump(report, fh, indent=2)
            fh.write("\n")
    return 0 if report["passed"] else 1


def main(argv: Optional[Sequence[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args = _apply_config(args, argv)
    except (OSError, ValueError) as exc:
        print(f"decaywalk: config error: {exc}", file=sys.stderr)
        return 2
    set_threads(args.threads)
    handlers = {
        "simulate": cmd_simulate,
        "moments": cmd_moments,
        "phase": cmd_phase,
        "verify": cmd_verify,
    }
    try:
        return handlers[args.command](args)
    except ParameterError as exc:
        print(f"decaywalk: invalid parameters: {exc}", file=sys.stderr)
        return 2
    except NotConvergentRegimeError as exc:
        print(f"decaywalk: {exc}", file=sys.stderr)
        return 2
    except ResourceLimitError as exc:
        print(f"decaywalk: resource limit: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
