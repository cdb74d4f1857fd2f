"""CSV and JSON writers for figure-ready data.

Floats are written with 17 significant digits through ``format`` (locale
independent), rows come out in a fixed order, and files are written to a
temporary sibling and then renamed into place.
"""

from __future__ import annotations

import csv
import io
import json
import os
import tempfile
from pathlib import Path

import numpy as np

from .state import StateSpec, normalization, pnd_table
from .wigner import WignerGrid

PND_HEADER = ("n_a", "n_b", "probability")
SWEEP_HEADER = ("lambda", "m", "n", "mean_na", "mean_nb", "var_Q", "var_P", "g12", "R_ab")
GRID_HEADER = ("x", "y", "W")
EVOLVE_HEADER = ("kappa_t", "nbar", "lambda", "m", "n", "grid_min", "negative_fraction")


def fmt(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return format(float(value), ".17g")


def _jsonable(obj):
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    return obj


def csv_text(header, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([fmt(v) for v in row])
    return buf.getvalue()


def json_text(payload: dict) -> str:
    return json.dumps(_jsonable(payload), indent=2, sort_keys=True) + "\n"


def atomic_write(path, text: str) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    return path


def spec_dict(spec: StateSpec) -> dict:
    return {"lambda": spec.lam, "m": spec.m, "n": spec.n}


# -- photon-number distribution ---------------------------------------------


def pnd_rows(spec: StateSpec, cutoff: int):
    table = pnd_table(spec, cutoff)
    for na in range(cutoff + 1):
        for nb in range(cutoff + 1):
            yield na, nb, table[na, nb]


def pnd_csv(spec: StateSpec, cutoff: int) -> str:
    return csv_text(PND_HEADER, pnd_rows(spec, cutoff))


def state_metadata(spec: StateSpec, cutoff: int) -> dict:
    return {**spec_dict(spec), "cutoff": cutoff, "norm": normalization(spec)}


def write_pnd(path, spec: StateSpec, cutoff: int) -> tuple[Path, Path]:
    path = Path(path)
    meta = path.with_suffix(".json")
    atomic_write(path, pnd_csv(spec, cutoff))
    atomic_write(meta, json_text(state_metadata(spec, cutoff)))
    return path, meta


# -- moments sweep ------------------------------------------------------------


def sweep_csv(rows) -> str:
    return csv_text(SWEEP_HEADER, ([r[k] for k in SWEEP_HEADER] for r in rows))


# -- Wigner grids -----------------------------------------------------------


def grid_csv(grid: WignerGrid) -> str:
    rows = (
        (grid.x[i], grid.y[j], grid.values[i, j])
        for i in range(len(grid.x))
        for j in range(len(grid.y))
    )
    return csv_text(GRID_HEADER, rows)


def grid_sidecar(grid: WignerGrid, spec: StateSpec, channel=None) -> dict:
    out = {**grid.summary(), "spec": spec_dict(spec)}
    if channel is not None:
        out["channel"] = {"kappa_t": channel.kappa_t, "nbar": channel.nbar}
    return out


def write_grid(path, grid: WignerGrid, spec: StateSpec, channel=None) -> tuple[Path, Path]:
    path = Path(path)
    meta = path.with_suffix(".json")
    atomic_write(path, grid_csv(grid))
    atomic_write(meta, json_text(grid_sidecar(grid, spec, channel)))
    return path, meta


# -- decoherence ------------------------------------------------------------


def evolve_csv(rows) -> str:
    return csv_text(EVOLVE_HEADER, ([r[k] for k in EVOLVE_HEADER] for r in rows))


def threshold_report(nbar: float, kt_c: float) -> dict:
    return {"nbar": nbar, "kt_c": kt_c}
