"""Command-line front end: ``tpssv <command> [flags]``.

Every flag can also come from a JSON file given with ``--config``; keys use
the flag names with dashes turned into underscores (``kappa_t``, ``lambda``).
Flags on the command line win over the file.

Exit codes: 0 ok, 1 verification failure, 2 invalid input, 3 resource limit.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import export, verify
from .channel import ChannelSpec, evolved_evaluator, threshold_time
from .errors import CutoffTooSmall, GridTooLarge, LeakageTooLarge, SeriesNotConverged, TPSSVError
from .moments import antibunching, cross_correlation, moments, quadrature_variances, sweep_row
from .state import DEFAULT_TAIL_TOL, StateSpec, default_cutoff, normalization, tail_fraction
from .wigner import AXES, GridRequest, wf_grid

EXIT_OK = 0
EXIT_VERIFY = 1
EXIT_INVALID = 2
EXIT_RESOURCE = 3

# defaults applied after the config file is merged in
DEFAULTS = {
    "lambda": 0.5,
    "m": 0,
    "n": 0,
    "nbar": 0.0,
    "kappa_t": 0.0,
    "cutoff": None,
    "output": None,
    "lambda_min": 0.05,
    "lambda_max": 2.0,
    "lambda_steps": 40,
    "pairs": None,
    "slice": "p1p2",
    "range": 3.0,
    "steps": 61,
    "fixed": None,
    "kappa_t_values": None,
    "quick": False,
    "inject_fault": False,
}


class UsageError(Exception):
    """Bad command-line or config input."""


def _add_state(p):
    p.add_argument("--lambda", dest="lambda", type=float, help="squeezing parameter (> 0)")
    p.add_argument("--m", type=int, help="photons subtracted from mode a")
    p.add_argument("--n", type=int, help="photons subtracted from mode b")


def _add_channel(p):
    p.add_argument("--nbar", type=float, help="mean thermal photon number of the bath")
    p.add_argument("--kappa-t", dest="kappa_t", type=float, help="dimensionless decay time")


def _add_grid(p):
    p.add_argument("--slice", help="two axes out of q1,p1,q2,p2, e.g. p1p2 (default) or q1q2")
    p.add_argument("--range", type=float, help="half width of the square grid (default 3)")
    p.add_argument("--steps", type=int, help="points per axis (default 61)")
    p.add_argument("--fixed", action="append", metavar="AXIS=VALUE", help="value of a held axis (default 0)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="tpssv", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def command(name, help_):
        p = sub.add_parser(name, help=help_, argument_default=None)
        p.add_argument("--config", type=Path, help="JSON file with default values for any flag")
        p.add_argument("--output", type=Path, help="output file (stdout when omitted)")
        return p

    p = command("info", "normalization, moments, variances, g12, R_ab and threshold time")
    _add_state(p)
    _add_channel(p)

    p = command("pnd", "photon-number distribution on the full cutoff lattice")
    _add_state(p)
    p.add_argument("--cutoff", type=int, help="largest photon number per mode (default adaptive)")

    p = command("moments-sweep", "moments and variances over a lambda range")
    _add_state(p)
    p.add_argument("--lambda-min", dest="lambda_min", type=float)
    p.add_argument("--lambda-max", dest="lambda_max", type=float)
    p.add_argument("--lambda-steps", dest="lambda_steps", type=int)
    p.add_argument("--pairs", help="list of m:n pairs, e.g. 1:2,3:4 (overrides --m/--n)")

    p = command("wigner", "Wigner function on a 2D slice; --kappa-t > 0 gives the decohered state")
    _add_state(p)
    _add_channel(p)
    _add_grid(p)

    p = command("evolve-sweep", "grid minimum and negative fraction versus decay time")
    _add_state(p)
    _add_channel(p)
    _add_grid(p)
    p.add_argument("--kappa-t-values", dest="kappa_t_values", help="comma-separated decay times")

    p = command("threshold", "time after which the evolved Wigner function is non-negative")
    p.add_argument("--nbar", type=float)

    p = command("verify", "run the closed-form vs oracle acceptance checks")
    p.add_argument("--quick", action="store_true", default=None, help="restrict sweeps to m, n <= 2")
    p.add_argument("--inject-fault", dest="inject_fault", action="store_true", default=None, help=argparse.SUPPRESS)
    return parser


def resolve(args: argparse.Namespace) -> dict:
    """Merge defaults, config file and flags, in increasing priority."""
    cfg = dict(DEFAULTS)
    if args.config is not None:
        try:
            loaded = json.loads(Path(args.config).read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read config {args.config}: {exc}") from exc
        if not isinstance(loaded, dict):
            raise UsageError("config file must hold a JSON object")
        unknown = set(loaded) - set(DEFAULTS)
        if unknown:
            raise UsageError(f"unknown config keys: {sorted(unknown)}")
        cfg.update(loaded)
    for key, value in vars(args).items():
        if value is not None and key not in ("command", "config"):
            cfg[key] = value
    return cfg


# -- config to domain objects -----------------------------------------------


def _int(cfg, key):
    v = cfg[key]
    if isinstance(v, bool) or not isinstance(v, (int, float)) or int(v) != v:
        raise UsageError(f"{key} must be an integer, got {v!r}")
    return int(v)


def _float(cfg, key):
    v = cfg[key]
    if isinstance(v, bool) or not isinstance(v, (int, float)) or not math.isfinite(v):
        raise UsageError(f"{key} must be a finite number, got {v!r}")
    return float(v)


def state_from(cfg, m=None, n=None) -> StateSpec:
    return StateSpec(_float(cfg, "lambda"), _int(cfg, "m") if m is None else m, _int(cfg, "n") if n is None else n)


def channel_from(cfg, kappa_t=None) -> ChannelSpec:
    return ChannelSpec(_float(cfg, "kappa_t") if kappa_t is None else kappa_t, _float(cfg, "nbar"))


def grid_from(cfg) -> GridRequest:
    name = str(cfg["slice"])
    half = _float(cfg, "range")
    steps = _int(cfg, "steps")
    if half <= 0:
        raise UsageError("range must be > 0")
    fixed = {}
    items = cfg["fixed"] or []
    if isinstance(items, dict):
        items = [f"{k}={v}" for k, v in items.items()]
    for item in items:
        axis, _, value = str(item).partition("=")
        if axis not in AXES:
            raise UsageError(f"--fixed expects AXIS=VALUE with AXIS in {AXES}, got {item!r}")
        try:
            fixed[axis] = float(value)
        except ValueError as exc:
            raise UsageError(f"bad value in --fixed {item!r}") from exc
    return GridRequest.slice(name, x_range=(-half, half), y_range=(-half, half), x_steps=steps, y_steps=steps, fixed=fixed)


def _pairs(cfg):
    raw = cfg["pairs"]
    if raw is None:
        return [(_int(cfg, "m"), _int(cfg, "n"))]
    if isinstance(raw, str):
        raw = [p.split(":") for p in raw.split(",") if p.strip()]
    try:
        return [(int(a), int(b)) for a, b in raw]
    except (TypeError, ValueError) as exc:
        raise UsageError(f"pairs must look like 1:2,3:4, got {cfg['pairs']!r}") from exc


def _kappa_values(cfg):
    raw = cfg["kappa_t_values"]
    if raw is None:
        return [0.0, 0.05, 0.1, 0.15, 0.2]
    if isinstance(raw, str):
        raw = raw.split(",")
    try:
        return [float(v) for v in raw]
    except ValueError as exc:
        raise UsageError(f"kappa_t_values must be numbers, got {raw!r}") from exc


# -- commands -------------------------------------------------------------


def _emit(cfg, text: str) -> None:
    if cfg["output"] is None:
        sys.stdout.write(text)
    else:
        export.atomic_write(cfg["output"], text)


def cmd_info(cfg) -> int:
    spec = state_from(cfg)
    nbar = _float(cfg, "nbar")
    if nbar < 0:
        raise UsageError("nbar must be >= 0")
    report = {
        **export.spec_dict(spec),
        "normalization": normalization(spec),
        **{k: v for k, v in moments(spec).as_dict().items()},
        **quadrature_variances(spec).as_dict(),
        "g12": cross_correlation(spec),
        "R_ab": antibunching(spec),
        "nbar": nbar,
        "kt_c": threshold_time(nbar),
    }
    _emit(cfg, export.json_text(report))
    return EXIT_OK


def cmd_pnd(cfg) -> int:
    spec = state_from(cfg)
    cutoff = default_cutoff(spec) if cfg["cutoff"] is None else _int(cfg, "cutoff")
    if cutoff < 0:
        raise UsageError("cutoff must be >= 0")
    tail = tail_fraction(spec, cutoff)
    if tail > DEFAULT_TAIL_TOL:
        raise CutoffTooSmall(f"cutoff {cutoff} drops probability {tail:.3e}; raise --cutoff or omit it")
    if cfg["output"] is None:
        sys.stdout.write(export.pnd_csv(spec, cutoff))
    else:
        export.write_pnd(cfg["output"], spec, cutoff)
    return EXIT_OK


def cmd_moments_sweep(cfg) -> int:
    steps = _int(cfg, "lambda_steps")
    lo, hi = _float(cfg, "lambda_min"), _float(cfg, "lambda_max")
    if steps < 1 or lo <= 0 or hi < lo:
        raise UsageError("need 0 < lambda_min <= lambda_max and lambda_steps >= 1")
    specs = [StateSpec(float(lam), m, n) for m, n in _pairs(cfg) for lam in np.linspace(lo, hi, steps)]
    _emit(cfg, export.sweep_csv(sweep_row(s) for s in specs))
    return EXIT_OK


def cmd_wigner(cfg) -> int:
    spec = state_from(cfg)
    ch = channel_from(cfg)
    grid = wf_grid(spec, grid_from(cfg), evolved_evaluator(ch))
    channel = ch if ch.kappa_t > 0 else None
    if cfg["output"] is None:
        sys.stdout.write(export.grid_csv(grid))
        sys.stderr.write(export.json_text(export.grid_sidecar(grid, spec, channel)))
    else:
        export.write_grid(cfg["output"], grid, spec, channel)
    return EXIT_OK


def cmd_evolve_sweep(cfg) -> int:
    spec = state_from(cfg)
    request = grid_from(cfg)
    nbar = _float(cfg, "nbar")
    rows = []
    for kt in _kappa_values(cfg):
        ch = channel_from(cfg, kappa_t=kt)
        grid = wf_grid(spec, request, evolved_evaluator(ch))
        rows.append(
            {
                "kappa_t": kt,
                "nbar": nbar,
                "lambda": spec.lam,
                "m": spec.m,
                "n": spec.n,
                "grid_min": grid.min_value,
                "negative_fraction": grid.negative_fraction,
            }
        )
    _emit(cfg, export.evolve_csv(rows))
    return EXIT_OK


def cmd_threshold(cfg) -> int:
    nbar = _float(cfg, "nbar")
    if nbar < 0:
        raise UsageError("nbar must be >= 0")
    _emit(cfg, export.json_text(export.threshold_report(nbar, threshold_time(nbar))))
    return EXIT_OK


def cmd_verify(cfg) -> int:
    results = verify.run_all(quick=bool(cfg["quick"]), inject_fault=bool(cfg["inject_fault"]))
    ok = verify.suite_passed(results)
    for r in results:
        sys.stderr.write(r.line() + "\n")
    report = {"passed": ok, "quick": bool(cfg["quick"]), "checks": [r.as_dict() for r in results]}
    _emit(cfg, export.json_text(report))
    return EXIT_OK if ok else EXIT_VERIFY


COMMANDS = {
    "info": cmd_info,
    "pnd": cmd_pnd,
    "moments-sweep": cmd_moments_sweep,
    "wigner": cmd_wigner,
    "evolve-sweep": cmd_evolve_sweep,
    "threshold": cmd_threshold,
    "verify": cmd_verify,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits with 2 on bad usage already; keep 0 for --help
        return int(exc.code or 0)
    try:
        cfg = resolve(args)
        return COMMANDS[args.command](cfg)
    except (GridTooLarge, CutoffTooSmall, SeriesNotConverged, LeakageTooLarge) as exc:
        print(f"tpssv: resource limit: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except (UsageError, TPSSVError, ValueError) as exc:
        print(f"tpssv: invalid input: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
