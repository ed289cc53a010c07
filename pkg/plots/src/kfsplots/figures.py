"""Render simulator outputs into deterministic figures.

Wigner panels use a diverging palette with limits symmetric about zero so
negative regions are unmistakable. Re-rendering the same inputs yields
byte-identical files: SVG dates are suppressed and the hash salt is pinned;
PNG carries no timestamps. Input files are only ever read.
"""

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .reader import SchemaError, load_field, load_sweep

plt.rcParams["svg.hashsalt"] = "kfsplots"

#: savefig keywords that keep the output stable across runs
_STABLE = {"png": {"metadata": {"Software": None}},
           "svg": {"metadata": {"Date": None}}}


def _save(fig, out_path, dpi=150):
    suffix = str(out_path).rsplit(".", 1)[-1].lower()
    if suffix not in _STABLE:
        raise SchemaError(f"unsupported figure format {suffix!r} (use png or svg)")
    fig.savefig(out_path, dpi=dpi, **_STABLE[suffix])
    plt.close(fig)


def plot_wigner_panels(field_paths, out_path, titles=None):
    """One row of phase-space panels sharing a symmetric diverging scale."""
    fields = [load_field(p) for p in field_paths]
    vmax = max(float(np.abs(w).max()) for _, _, w in fields)
    if vmax == 0.0:
        vmax = 1.0
    n = len(fields)
    fig, axes = plt.subplots(1, n, figsize=(4.2 * n, 3.8), squeeze=False)
    for ax, (x, p, w), path in zip(axes[0], fields, field_paths):
        mesh = ax.pcolormesh(x, p, w.T, cmap="RdBu_r", vmin=-vmax, vmax=vmax,
                             shading="nearest", rasterized=True)
        ax.set_xlabel("x")
        ax.set_ylabel("p")
        ax.set_aspect("equal")
        fig.colorbar(mesh, ax=ax, label="W")
    if titles:
        for ax, title in zip(axes[0], titles):
            ax.set_title(title)
    fig.tight_layout()
    _save(fig, out_path)
    return {"out": str(out_path), "vmin": -vmax, "vmax": vmax, "panels": n,
            "min_w": min(float(w.min()) for _, _, w in fields)}


def plot_heatmap(sweep_path, x_axis, y_axis, metric, out_path):
    """Pivot a long-format sweep table onto a 2D map of the metric."""
    data = load_sweep(sweep_path, (x_axis, y_axis, metric))
    xs = np.unique(data[x_axis])
    ys = np.unique(data[y_axis])
    grid = np.full((ys.size, xs.size), np.nan)
    xi = {v: i for i, v in enumerate(xs)}
    yj = {v: j for j, v in enumerate(ys)}
    for x, y, value in zip(data[x_axis], data[y_axis], data[metric]):
        grid[yj[y], xi[x]] = value
    fig, ax = plt.subplots(figsize=(5.2, 4.2))
    mesh = ax.pcolormesh(xs, ys, grid, cmap="viridis", shading="nearest")
    ax.set_xlabel(x_axis)
    ax.set_ylabel(y_axis)
    fig.colorbar(mesh, ax=ax, label=metric)
    fig.tight_layout()
    _save(fig, out_path)
    return {"out": str(out_path), "shape": grid.shape,
            "column_max": {float(x): float(np.nanmax(grid[:, xi[x]])) for x in xs}}


def plot_lines(sweep_path, x_axis, metric, out_path, group_by=None):
    """Metric against one axis, optionally one line per value of another."""
    columns = (x_axis, metric) if group_by is None else (x_axis, metric, group_by)
    data = load_sweep(sweep_path, columns)
    fig, ax = plt.subplots(figsize=(5.2, 3.9))
    groups = [None] if group_by is None else list(np.unique(data[group_by]))
    for g in groups:
        if g is None:
            mask = np.ones(data[x_axis].size, dtype=bool)
            label = None
        else:
            mask = data[group_by] == g
            label = f"{group_by}={g:g}"
        order = np.argsort(data[x_axis][mask])
        ax.plot(data[x_axis][mask][order], data[metric][mask][order],
                marker="o", label=label)
    ax.set_xlabel(x_axis)
    ax.set_ylabel(metric)
    if group_by is not None:
        ax.legend()
    fig.tight_layout()
    _save(fig, out_path)
    return {"out": str(out_path), "n_lines": len(groups),
            "y_range": (float(np.nanmin(data[metric])), float(np.nanmax(data[metric])))}
