"""File formats: JSON configs and states, CSV tables.

Everything numeric is written with 17 significant digits, so a state
written and re-read is elementwise identical. Configuration parsing is
strict: an unknown key anywhere fails with the offending key named.
Angles in config files are degrees (converted to radians internally).
"""

from __future__ import annotations

import csv
import json
import math
import os
from dataclasses import dataclass

import numpy as np

from .dynamics import EvolutionConfig
from .errors import ConfigError
from .params import TERM_NAMES, ModelParams, TermToggles
from .wigner import PhaseSpaceGrid


def format_float(value) -> str:
    return format(float(value), ".17g")


def _check_keys(d: dict, allowed: set[str], required: set[str], context: str) -> None:
    unknown = set(d) - allowed
    if unknown:
        raise ConfigError(f"unknown key {sorted(unknown)[0]!r} in {context}")
    missing = required - set(d)
    if missing:
        raise ConfigError(f"missing key {sorted(missing)[0]!r} in {context}")


# --- model parameters -------------------------------------------------------

_MODEL_KEYS = {"u", "delta", "amp", "theta", "lam", "eta", "n_cut", "toggles"}


def model_params_from_dict(d: dict, context: str = "model") -> ModelParams:
    """Build ModelParams from a config mapping; theta is in degrees."""
    if not isinstance(d, dict):
        raise ConfigError(f"{context} must be a mapping")
    _check_keys(d, _MODEL_KEYS, set(), context)
    kwargs = {}
    for key in ("u", "delta", "amp", "lam", "eta"):
        if key in d:
            kwargs[key] = float(d[key])
    if "theta" in d:
        kwargs["theta"] = math.radians(float(d["theta"]))
    if "n_cut" in d:
        kwargs["n_cut"] = int(d["n_cut"])
    if "toggles" in d:
        t = d["toggles"]
        if not isinstance(t, dict):
            raise ConfigError(f"{context}.toggles must be a mapping")
        _check_keys(t, set(TERM_NAMES), set(), f"{context}.toggles")
        kwargs["toggles"] = TermToggles(**{k: bool(v) for k, v in t.items()})
    return ModelParams(**kwargs)


def model_params_to_dict(p: ModelParams) -> dict:
    """Inverse of model_params_from_dict (theta back to degrees)."""
    d = {
        "u": p.u,
        "delta": p.delta,
        "amp": p.amp,
        "theta": math.degrees(p.theta),
        "lam": p.lam,
        "eta": p.eta,
        "n_cut": p.n_cut,
    }
    if p.toggles != TermToggles():
        d["toggles"] = {name: getattr(p.toggles, name) for name in TERM_NAMES}
    return d


# --- run configuration ------------------------------------------------------

_GRID_KEYS = {"x_min", "x_max", "p_min", "p_max", "nx", "np"}


def grid_from_config(g, context: str = "grid") -> PhaseSpaceGrid | None:
    if g == "auto" or g is None:
        return None
    if not isinstance(g, dict):
        raise ConfigError(f"{context} must be 'auto' or a mapping")
    _check_keys(g, _GRID_KEYS, {"x_min", "x_max", "p_min", "p_max"}, context)
    kwargs = {k: float(g[k]) for k in ("x_min", "x_max", "p_min", "p_max")}
    for k in ("nx", "np"):
        if k in g:
            kwargs[k] = int(g[k])
    return PhaseSpaceGrid(**kwargs)


_EVOLUTION_KEYS = {"dt", "t_max", "record_every", "ss_tol", "tail_tol"}


def evolution_from_config(d, context: str = "evolution") -> EvolutionConfig:
    if d is None:
        return EvolutionConfig()
    if not isinstance(d, dict):
        raise ConfigError(f"{context} must be a mapping")
    _check_keys(d, _EVOLUTION_KEYS, set(), context)
    kwargs = {}
    for k in ("dt", "t_max", "ss_tol", "tail_tol"):
        if k in d:
            kwargs[k] = float(d[k])
    if "record_every" in d:
        kwargs["record_every"] = int(d["record_every"])
    return EvolutionConfig(**kwargs)


@dataclass(frozen=True)
class RunConfig:
    model: ModelParams
    evolution: EvolutionConfig
    grid: PhaseSpaceGrid | None   # None = automatic
    outputs: str
    seed: int = 0                 # reserved; the pipeline is deterministic
    track_negativity: bool = False


_RUN_KEYS = {"model", "evolution", "grid", "outputs", "seed", "track_negativity"}


def load_run_config(path: str) -> RunConfig:
    with open(path) as fh:
        try:
            raw = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{path} is not valid JSON: {exc}") from exc
    if not isinstance(raw, dict):
        raise ConfigError(f"{path}: top level must be a mapping")
    _check_keys(raw, _RUN_KEYS, {"model", "outputs"}, path)
    return RunConfig(
        model=model_params_from_dict(raw["model"]),
        evolution=evolution_from_config(raw.get("evolution")),
        grid=grid_from_config(raw.get("grid", "auto")),
        outputs=str(raw["outputs"]),
        seed=int(raw.get("seed", 0)),
        track_negativity=bool(raw.get("track_negativity", False)),
    )


# --- sweep specification ----------------------------------------------------

_SWEEP_KEYS = {"base", "axes", "solver", "grid", "budget", "resolution", "output"}


def load_sweep_spec(path: str):
    from .sweep import SweepSpec

    with open(path) as fh:
        try:
            raw = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{path} is not valid JSON: {exc}") from exc
    if not isinstance(raw, dict):
        raise ConfigError(f"{path}: top level must be a mapping")
    _check_keys(raw, _SWEEP_KEYS, {"base", "axes"}, path)
    axes_raw = raw["axes"]
    if not isinstance(axes_raw, list):
        raise ConfigError("axes must be a list of [name, values] pairs")
    axes = []
    for item in axes_raw:
        if not (isinstance(item, list) and len(item) == 2):
            raise ConfigError("each axis must be a [name, values] pair")
        name, values = item
        axes.append((str(name), tuple(float(v) for v in values)))
    kwargs = {}
    if "budget" in raw:
        kwargs["budget"] = int(raw["budget"])
    if "resolution" in raw:
        kwargs["resolution"] = int(raw["resolution"])
    return SweepSpec(
        base=model_params_from_dict(raw["base"], context="base"),
        axes=tuple(axes),
        solver=str(raw.get("solver", "direct")),
        grid=grid_from_config(raw.get("grid", "auto")),
        output_path=raw.get("output"),
        **kwargs,
    )


def sweep_spec_to_dict(spec) -> dict:
    return {
        "base": model_params_to_dict(spec.base),
        "axes": [[name, list(values)] for name, values in spec.axes],
        "solver": spec.solver,
        "grid": "auto" if spec.grid is None else {
            "x_min": spec.grid.x_min, "x_max": spec.grid.x_max,
            "p_min": spec.grid.p_min, "p_max": spec.grid.p_max,
            "nx": spec.grid.nx, "np": spec.grid.np,
        },
        "budget": spec.budget,
        "resolution": spec.resolution,
        "output": spec.output_path,
    }


# --- state files ------------------------------------------------------------

_STATE_KEYS = {"n_cut", "format", "re", "im"}


def save_state(path: str, rho: np.ndarray) -> None:
    D = rho.shape[0]
    flat = np.asarray(rho, dtype=complex).reshape(-1)  # row-major
    payload = "".join(
        [
            '{"n_cut": %d, "format": "dense-row-major",\n' % D,
            '"re": [', ", ".join(format_float(v) for v in flat.real), "],\n",
            '"im": [', ", ".join(format_float(v) for v in flat.imag), "]}\n",
        ]
    )
    with open(path, "w") as fh:
        fh.write(payload)


def load_state(path: str) -> np.ndarray:
    with open(path) as fh:
        try:
            raw = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{path} is not valid JSON: {exc}") from exc
    _check_keys(raw, _STATE_KEYS, _STATE_KEYS, path)
    if raw["format"] != "dense-row-major":
        raise ConfigError(f"{path}: unsupported state format {raw['format']!r}")
    D = int(raw["n_cut"])
    re = np.asarray(raw["re"], dtype=float)
    im = np.asarray(raw["im"], dtype=float)
    if re.size != D * D or im.size != D * D:
        raise ConfigError(f"{path}: expected {D * D} entries, got {re.size}/{im.size}")
    return (re + 1j * im).reshape(D, D)


# --- CSV tables -------------------------------------------------------------

def write_timeseries(path: str, series) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["t", "mean_n", "re_a", "im_a", "purity", "negativity"])
        neg = series.negativity
        for i, t in enumerate(series.times):
            w.writerow(
                [
                    format_float(t),
                    format_float(series.mean_n[i]),
                    format_float(series.mean_a[i].real),
                    format_float(series.mean_a[i].imag),
                    format_float(series.purity[i]),
                    format_float(neg[i]) if neg is not None else "",
                ]
            )


def write_field(path: str, field) -> None:
    xs = field.grid.x_samples()
    ps = field.grid.p_samples()
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["x", "p", "w"])
        for i, x in enumerate(xs):
            for j, p in enumerate(ps):
                w.writerow([format_float(x), format_float(p), format_float(field.values[i, j])])


def _sidecar_path(path: str) -> str:
    root, _ = os.path.splitext(path)
    return root + ".meta.json"


def write_sweep_result(path: str, result) -> None:
    from . import __version__
    from .sweep import METRIC_COLUMNS

    names = result.spec.axis_names
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(list(names) + list(METRIC_COLUMNS))
        for row in result.rows:
            cells = [format_float(v) for v in row.values]
            for col in ("negativity", "mean_n", "purity", "residual", "tail_mass"):
                value = getattr(row, col)
                cells.append("" if value is None else format_float(value))
            cells.append(row.error)
            w.writerow(cells)
    sidecar = {
        "spec": sweep_spec_to_dict(result.spec),
        "version": result.version or __version__,
        "n_points": len(result.rows),
    }
    with open(_sidecar_path(path), "w") as fh:
        json.dump(sidecar, fh, indent=1, sort_keys=True)
        fh.write("\n")


def read_sweep_rows(path: str, axis_names) -> list:
    from .sweep import SweepRow

    rows = []
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None:
            return []
        for name in axis_names:
            if name not in reader.fieldnames:
                raise ConfigError(f"{path}: missing axis column {name!r}")
        for rec in reader:
            row = SweepRow(values=tuple(float(rec[name]) for name in axis_names))
            for col in ("negativity", "mean_n", "purity", "residual", "tail_mass"):
                cell = rec.get(col, "")
                setattr(row, col, float(cell) if cell else None)
            row.error = rec.get("error", "") or ""
            rows.append(row)
    return rows
