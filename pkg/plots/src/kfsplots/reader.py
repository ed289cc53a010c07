"""Readers for the simulator's CSV output files.

Wigner fields come as long-format x,p,w tables on a rectangular grid;
sweeps as axis columns followed by metric columns. Every reader validates
the header and fails with the offending column named.
"""

import csv

import numpy as np


class SchemaError(Exception):
    """An input file does not match the expected column layout."""


def _require_columns(fieldnames, needed, path):
    if fieldnames is None:
        raise SchemaError(f"{path}: empty file, no header row")
    for name in needed:
        if name not in fieldnames:
            raise SchemaError(f"{path}: missing column {name!r} (found {list(fieldnames)})")


def load_field(path):
    """Read an x,p,w table back into (x_axis, p_axis, W[i, j]) arrays."""
    xs, ps, ws = [], [], []
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        _require_columns(reader.fieldnames, ("x", "p", "w"), path)
        for rec in reader:
            xs.append(float(rec["x"]))
            ps.append(float(rec["p"]))
            ws.append(float(rec["w"]))
    if not xs:
        raise SchemaError(f"{path}: no data rows")
    x_axis = np.unique(xs)
    p_axis = np.unique(ps)
    if x_axis.size * p_axis.size != len(ws):
        raise SchemaError(
            f"{path}: {len(ws)} rows do not fill a {x_axis.size} x {p_axis.size} grid"
        )
    values = np.full((x_axis.size, p_axis.size), np.nan)
    xi = {v: i for i, v in enumerate(x_axis)}
    pj = {v: j for j, v in enumerate(p_axis)}
    for x, p, w in zip(xs, ps, ws):
        values[xi[x], pj[p]] = w
    if np.isnan(values).any():
        raise SchemaError(f"{path}: grid has holes (duplicate or missing points)")
    return x_axis, p_axis, values


def load_sweep(path, columns):
    """Read the named columns of a sweep table ('' cells become nan)."""
    out = {name: [] for name in columns}
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        _require_columns(reader.fieldnames, columns, path)
        for rec in reader:
            for name in columns:
                cell = rec[name]
                out[name].append(float(cell) if cell not in ("", None) else np.nan)
    if not next(iter(out.values())):
        raise SchemaError(f"{path}: no data rows")
    return {name: np.asarray(vals) for name, vals in out.items()}
