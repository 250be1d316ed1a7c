"""Batch front door: simulate endpoint batches, dump densities on grids and
run the verification suite, emitting diffable CSV/JSON artifacts.

Commands
--------
``fracmotion simulate``  draws endpoint batches to CSV (header
``x,y,n,is_singular``) plus a run-manifest JSON.  ``fracmotion density``
dumps a named law on a grid to CSV (header ``r,density`` or ``x,density``)
plus a sidecar JSON recording the singular weight (where the law has one)
and a count of out-of-support rows, which are written as ``nan``.
``fracmotion verify`` runs reconciliation checks and writes the report JSON.

Every command is a pure function of its :class:`RunConfig` plus seed:
identical inputs yield byte-identical outputs, except for a timestamp field
confined to the manifest.

Rates use the mini-grammar ``const:<lam>``, ``power:<a>,<b>`` and
``piecewise:<t1>:<v1>,<t2>:<v2>,...`` mirroring the RateFunction kinds.

Exit codes: 0 success, 1 verification failure, 2 usage error, 3 numeric
error.  The environment variable ``FRACMOTION_OUT_DIR`` sets the default
output directory when ``--out`` is not given.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import os
import platform
import sys
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path

import numpy as np
import scipy

from . import __version__
from .counting import FracPoissonSpec, RateFunction
from .densities import (
    classical_line_density,
    flight_unconditional,
    line_law,
    planar_density_const_rate,
    planar_law,
)
from .motion import MotionConfig, conditioned_endpoints, endpoint_arrays
from .specfun import ConvergenceError, DomainError, RangeOverflowError
from .verify import (
    VerificationReport,
    empirical_cf,
    eigenfunction_residual,
    law_agreement,
    mc_gof,
    pgf_ode_residual,
    run_default_suite,
    run_negative_controls,
    telegraph_residual,
)

__all__ = [
    "RunConfig",
    "parse_rate",
    "cmd_simulate",
    "cmd_density",
    "cmd_verify",
    "main",
]

OUT_DIR_ENV = "FRACMOTION_OUT_DIR"

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_USAGE = 2
EXIT_NUMERIC = 3


@dataclass(frozen=True)
class RunConfig:
    """A command name plus its fully resolved, JSON-serializable parameters."""

    command: str
    params: dict

    def to_json(self) -> str:
        return json.dumps({"command": self.command, "params": self.params},
                          sort_keys=True, indent=2)

    @classmethod
    def from_json(cls, text: str) -> "RunConfig":
        payload = json.loads(text)
        return cls(command=payload["command"], params=dict(payload["params"]))


def parse_rate(text: str) -> RateFunction:
    """Parse the rate mini-grammar into a RateFunction.

    ``const:2``; ``power:3,0.5`` for 3*s^0.5; ``piecewise:1:2,3:0.5`` for
    rate 2 on (0,1], 0.5 on (1,3], zero afterwards.
    """
    kind, sep, rest = text.partition(":")
    if not sep:
        raise ValueError(f"rate {text!r} is missing ':' — expected kind:parameters")
    try:
        if kind == "const":
            return RateFunction.constant(float(rest))
        if kind == "power":
            a_str, b_str = rest.split(",")
            return RateFunction.power(float(a_str), float(b_str))
        if kind == "piecewise":
            pairs = [seg.split(":") for seg in rest.split(",")]
            if any(len(p) != 2 for p in pairs):
                raise ValueError("piecewise segments must look like t:value")
            return RateFunction.piecewise(
                [float(p[0]) for p in pairs], [float(p[1]) for p in pairs]
            )
    except DomainError:
        raise
    except ValueError as exc:
        raise ValueError(f"cannot parse rate {text!r}: {exc}") from None
    raise ValueError(f"unknown rate kind {kind!r}; use const, power or piecewise")


# ---------------------------------------------------------------------------
# Output plumbing.


def _resolve_out(params: dict, default_name: str) -> Path:
    out = params.get("out")
    if out:
        return Path(out)
    return Path(os.environ.get(OUT_DIR_ENV, ".")) / default_name


def _write_manifest(path: Path, config: RunConfig, extra: dict | None = None) -> None:
    manifest = {
        "command": config.command,
        "config": config.params,
        "package_version": __version__,
        "numpy_version": np.__version__,
        "scipy_version": scipy.__version__,
        "python_version": platform.python_version(),
        "generated_at": datetime.now(timezone.utc).isoformat(),
    }
    if extra:
        manifest.update(extra)
    path.write_text(json.dumps(manifest, sort_keys=True, indent=2) + "\n")


def _fmt(value: float) -> str:
    return repr(float(value))


# ---------------------------------------------------------------------------
# Commands.  Each takes a RunConfig and returns a process exit code.


def cmd_simulate(config: RunConfig) -> int:
    """Draw an endpoint batch and write ``x,y,n,is_singular`` CSV + manifest."""
    p = config.params
    rate = parse_rate(p["rate"])
    spec = FracPoissonSpec(alpha=p["alpha"], rate=rate)
    cfg = MotionConfig(c=p["c"], t=p["t"], count_spec=spec,
                       instants_mode=p.get("instants_mode", "order-statistics"))
    cols = endpoint_arrays(cfg, p["samples"], p["seed"], p.get("workers", 1))
    out = _resolve_out(p, "endpoints.csv")
    out.parent.mkdir(parents=True, exist_ok=True)
    with out.open("w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["x", "y", "n", "is_singular"])
        for i in range(cols.x.size):
            writer.writerow([
                _fmt(cols.x[i]),
                _fmt(cols.y[i]),
                int(cols.n[i]),
                "true" if cols.is_singular[i] else "false",
            ])
    _write_manifest(out.with_suffix(out.suffix + ".manifest.json"), config,
                    {"rows": int(cols.x.size)})
    print(f"wrote {cols.x.size} endpoints to {out}")
    return EXIT_OK


def _density_evaluator(p: dict):
    """(coordinate header, evaluator, singular weight or None, support
    predicate) for a law name.  Points failing the predicate become ``nan``
    rows counted in the sidecar."""
    law_name = p["law"]
    c, t = p["c"], p["t"]
    ct = c * t
    radial_support = lambda r: 0.0 <= r < ct  # noqa: E731
    line_support = lambda x: -ct < x < ct  # noqa: E731
    if law_name == "planar":
        spec = FracPoissonSpec(alpha=p["alpha"], rate=parse_rate(p["rate"]))
        law = planar_law(spec, c, t)
        return "r", lambda r: law.ac_density(r, 0.0), law.singular_weight, radial_support
    if law_name == "planar-const":
        lam = parse_rate(p["rate"])
        if lam.kind != "constant":
            raise DomainError("the single-series planar form needs a constant rate")
        lam0 = lam.params[0]
        return ("r", lambda r: planar_density_const_rate(p["alpha"], lam0, c, t, r, 0.0),
                None, radial_support)
    if law_name == "line":
        spec = FracPoissonSpec(alpha=p["alpha"], rate=parse_rate(p["rate"]))
        law = line_law(spec, c, t, method=p.get("method", "series"))
        return "x", law.density, None, line_support
    if law_name == "line-classical":
        lam = parse_rate(p["rate"])
        if lam.kind != "constant":
            raise DomainError("the classical line form needs a constant rate")
        lam0 = lam.params[0]
        return "x", lambda x: classical_line_density(lam0, c, t, x), None, line_support
    if law_name == "flight":
        from .counting import FlightCountSpec

        spec = FlightCountSpec(d=p["d"], rate=parse_rate(p["rate"]))
        return "r", lambda r: flight_unconditional(spec, c, t, r), None, radial_support
    raise DomainError(f"unknown law {law_name!r}")


def cmd_density(config: RunConfig) -> int:
    """Dump a law on a grid: ``coord,density`` CSV plus sidecar JSON."""
    p = config.params
    coord_name, evaluate, singular_weight, in_support = _density_evaluator(p)
    grid = np.linspace(p["grid_min"], p["grid_max"], p["grid_points"])
    out = _resolve_out(p, "density.csv")
    out.parent.mkdir(parents=True, exist_ok=True)
    nan_rows = 0
    with out.open("w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow([coord_name, "density"])
        for v in grid:
            if in_support(float(v)):
                try:
                    val = evaluate(float(v))
                except DomainError:
                    val = math.nan
            else:
                val = math.nan
            if math.isnan(val):
                nan_rows += 1
            writer.writerow([_fmt(v), _fmt(val)])
    sidecar = {
        "law": p["law"],
        "singular_weight": singular_weight,
        "nan_rows": nan_rows,
        "grid_points": int(grid.size),
        "config": config.params,
    }
    out.with_suffix(out.suffix + ".meta.json").write_text(
        json.dumps(sidecar, sort_keys=True, indent=2) + "\n"
    )
    if nan_rows:
        print(f"warning: {nan_rows} grid points outside the support", file=sys.stderr)
    print(f"wrote {grid.size} density values to {out}")
    return EXIT_OK


def _single_check(p: dict) -> list:
    name = p["check"]
    lam = p.get("lam", 1.0)
    alpha = p.get("alpha", 0.5)
    c, t = p.get("c", 1.0), p.get("t", 1.0)
    if name == "telegraph":
        return [telegraph_residual(lam, c)]
    if name == "eigenfunction":
        return [eigenfunction_residual(alpha, lam, c)]
    if name == "pgf":
        spec = FracPoissonSpec(alpha=alpha, rate=RateFunction.constant(lam))
        return [pgf_ode_residual(spec, t)]
    if name == "law":
        spec = FracPoissonSpec(alpha=alpha, rate=RateFunction.constant(lam))
        return [law_agreement(spec, c, t)]
    if name == "mc":
        spec = FracPoissonSpec(alpha=alpha, rate=RateFunction.constant(lam))
        cols = endpoint_arrays(MotionConfig(c=c, t=t, count_spec=spec),
                               p["samples"], p["seed"])
        return mc_gof(cols, planar_law(spec, c, t))
    if name == "cf":
        x, y = conditioned_endpoints(2, c, t, p["samples"], p["seed"])
        return [empirical_cf(x, y, 2, 1.0, 0.0, c, t)]
    raise DomainError(f"unknown check {name!r}")


def cmd_verify(config: RunConfig) -> int:
    """Run verification checks, write the report JSON, exit 0 iff all pass."""
    p = config.params
    if p.get("negative_control"):
        report = run_negative_controls(seed=p["seed"], n_samples=p["samples"])
    elif p.get("check"):
        report = VerificationReport(
            checks=_single_check(p),
            manifest={"seed": p["seed"], "n_samples": p["samples"],
                      "package_version": __version__},
        )
    else:
        report = run_default_suite(seed=p["seed"], n_samples=p["samples"])
    out = _resolve_out(p, "verify_report.json")
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(report.to_json() + "\n")
    for check in report.checks:
        verdict = "PASS" if check.passed else "FAIL"
        print(f"{verdict} {check.name}: statistic={check.statistic:.6g} "
              f"tolerance={check.tolerance:.6g}")
    print(f"report written to {out}")
    return EXIT_OK if report.all_passed else EXIT_VERIFY_FAILED


# ---------------------------------------------------------------------------
# Argument parsing.


def _positive_int(text: str) -> int:
    value = int(text)
    if value <= 0:
        raise argparse.ArgumentTypeError(f"must be a positive integer, got {text}")
    return value


def _rate_text(text: str) -> str:
    parse_rate(text)  # validate early so bad grammar is a usage error
    return text


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fracmotion",
        description="Simulate finite-velocity planar random motions, evaluate "
                    "their closed-form laws and reconcile the two.",
        epilog=f"Default output directory comes from ${OUT_DIR_ENV} (falls back "
               "to the working directory).",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="draw endpoint batches to CSV")
    sim.add_argument("--alpha", type=float, default=1.0,
                     help="fractional order of the driving counting process")
    sim.add_argument("--rate", type=_rate_text, default="const:1",
                     help="rate mini-grammar: const:<lam> | power:<a>,<b> | "
                          "piecewise:<t1>:<v1>,...")
    sim.add_argument("--c", type=float, default=1.0, help="speed")
    sim.add_argument("--t", type=float, default=1.0, help="time horizon")
    sim.add_argument("--samples", type=_positive_int, required=True)
    sim.add_argument("--seed", type=int, default=0)
    sim.add_argument("--workers", type=_positive_int, default=1)
    sim.add_argument("--instants-mode", dest="instants_mode",
                     choices=["order-statistics", "rate-weighted"],
                     default="order-statistics",
                     help="switch-instant placement; rate-weighted is exploratory "
                          "and does not reproduce the closed-form law")
    sim.add_argument("--out", default=None, help="CSV path")

    den = sub.add_parser("density", help="dump a closed-form law on a grid")
    den.add_argument("--law", required=True,
                     choices=["planar", "planar-const", "line", "line-classical", "flight"])
    den.add_argument("--alpha", type=float, default=1.0)
    den.add_argument("--rate", type=_rate_text, default="const:1")
    den.add_argument("--c", type=float, default=1.0)
    den.add_argument("--t", type=float, default=1.0)
    den.add_argument("--d", type=_positive_int, default=4,
                     help="flight dimension (flight law only)")
    den.add_argument("--method", choices=["series", "wright"], default="series",
                     help="line-law evaluation path")
    den.add_argument("--grid-min", dest="grid_min", type=float, default=0.0)
    den.add_argument("--grid-max", dest="grid_max", type=float, default=1.0)
    den.add_argument("--grid-points", dest="grid_points", type=_positive_int, default=100)
    den.add_argument("--out", default=None, help="CSV path")

    ver = sub.add_parser("verify", help="run reconciliation checks")
    ver.add_argument("--check", default=None,
                     choices=["telegraph", "eigenfunction", "pgf", "law", "mc", "cf"],
                     help="run a single check instead of the default suite")
    ver.add_argument("--alpha", type=float, default=0.5)
    ver.add_argument("--lambda", dest="lam", type=float, default=1.0)
    ver.add_argument("--c", type=float, default=1.0)
    ver.add_argument("--t", type=float, default=1.0)
    ver.add_argument("--samples", type=_positive_int, default=100_000)
    ver.add_argument("--seed", type=int, default=20260815)
    ver.add_argument("--negative-control", dest="negative_control", action="store_true",
                     help="run deliberately broken configurations; they must fail")
    ver.add_argument("--out", default=None, help="report JSON path")
    return parser


_COMMANDS = {
    "simulate": cmd_simulate,
    "density": cmd_density,
    "verify": cmd_verify,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    params = {k: v for k, v in vars(args).items() if k != "command"}
    config = RunConfig(command=args.command, params=params)
    try:
        return _COMMANDS[args.command](config)
    except DomainError as exc:
        print(f"fracmotion: invalid configuration: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ConvergenceError, RangeOverflowError, FloatingPointError, OverflowError) as exc:
        print(f"fracmotion: numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except OSError as exc:
        print(f"fracmotion: cannot write output: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
