"""Parameter-grid engine for negativity maps, line scans, and cutoff scans.

Grid points are independent solves distributed over a process pool; the
result rows are keyed and ordered by their lexicographic grid index, so
the output is identical no matter how many workers ran or in what order
points finished. Re-running a sweep with an existing output file computes
only the rows that are missing from it.
"""

from __future__ import annotations

import math
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import product
from multiprocessing import get_context

import numpy as np

from . import io as kio
from .dynamics import EvolutionConfig, observables, solve_steady_direct, solve_steady_evolved
from .errors import ConfigError, KfsError, ResourceGuardError, ValidationError
from .params import SCALAR_FIELDS, ModelParams
from .wigner import PhaseSpaceGrid, negativity, negativity_of_state, wigner_transform

DEFAULT_BUDGET = 4096

#: columns written after the axis columns
METRIC_COLUMNS = ("negativity", "mean_n", "purity", "residual", "tail_mass", "error")


@dataclass(frozen=True)
class SweepSpec:
    """Cartesian grid over 1-3 ModelParams fields.

    Axis values for "theta" follow the file convention and are degrees;
    everything else is taken as is. Rows are keyed by their formatted axis
    values, which is what makes partially completed sweeps restartable.
    """

    base: ModelParams
    axes: tuple[tuple[str, tuple[float, ...]], ...]  # ordered (field, values)
    solver: str = "direct"                           # "direct" or "evolve"
    grid: PhaseSpaceGrid | None = None               # None = automatic per state
    output_path: str | None = None
    budget: int = DEFAULT_BUDGET
    resolution: int = 160

    def __post_init__(self):
        if not 1 <= len(self.axes) <= 3:
            raise ValidationError(f"sweeps take 1-3 axes, got {len(self.axes)}")
        for name, values in self.axes:
            if name not in SCALAR_FIELDS:
                raise ValidationError(
                    f"axis {name!r} is not a ModelParams scalar field {SCALAR_FIELDS}"
                )
            if len(values) == 0:
                raise ValidationError(f"axis {name!r} has no values")
        if self.solver not in ("direct", "evolve"):
            raise ValidationError(f"solver must be 'direct' or 'evolve', got {self.solver!r}")
        total = math.prod(len(v) for _, v in self.axes)
        if total > self.budget:
            raise ResourceGuardError(
                f"sweep has {total} points, over the configured budget {self.budget}"
            )

    @property
    def axis_names(self) -> tuple[str, ...]:
        return tuple(name for name, _ in self.axes)

    def point_values(self) -> list[tuple[float, ...]]:
        return list(product(*(values for _, values in self.axes)))


@dataclass
class SweepRow:
    values: tuple[float, ...]
    negativity: float | None = None
    mean_n: float | None = None
    purity: float | None = None
    residual: float | None = None
    tail_mass: float | None = None
    error: str = ""
    wall_time: float = 0.0


@dataclass
class SweepResult:
    spec: SweepSpec
    rows: list[SweepRow]
    version: str = ""


def _params_at(spec: SweepSpec, values: tuple[float, ...]) -> ModelParams:
    changes = {}
    for name, value in zip(spec.axis_names, values):
        if name == "n_cut":
            changes[name] = int(value)
        elif name == "theta":
            changes[name] = math.radians(float(value))  # axis values are degrees
        else:
            changes[name] = float(value)
    return spec.base.replace(**changes)


def _solve_point(args) -> SweepRow:
    spec, values = args
    t0 = time.perf_counter()
    row = SweepRow(values=values)
    try:
        params = _params_at(spec, values)
        if spec.solver == "direct":
            result = solve_steady_direct(params)
        else:
            result = solve_steady_evolved(params, EvolutionConfig())
        obs = observables(result.rho)
        if spec.grid is not None:
            row.negativity = negativity(wigner_transform(result.rho, spec.grid))
        else:
            row.negativity = negativity_of_state(result.rho, resolution=spec.resolution)
        row.mean_n = obs["mean_n"]
        row.purity = obs["purity"]
        row.residual = result.residual
        row.tail_mass = obs["tail_mass"]
    except KfsError as exc:
        row.error = type(exc).__name__
    row.wall_time = time.perf_counter() - t0
    return row


def default_worker_count() -> int:
    env = os.environ.get("KFS_THREADS", "")
    if env:
        try:
            n = int(env)
        except ValueError as exc:
            raise ConfigError(f"KFS_THREADS must be an integer, got {env!r}") from exc
        if n < 1:
            raise ConfigError(f"KFS_THREADS must be >= 1, got {n}")
        return n
    return 1


def run_sweep(spec: SweepSpec, worker_count: int | None = None) -> SweepResult:
    """Solve every grid point; deterministic output, per-row error capture.

    Failures at individual points land in the row's error column without
    aborting the sweep. When spec.output_path exists, rows already present
    there are reused and only the missing ones are computed.
    """
    from . import __version__

    if worker_count is None:
        worker_count = default_worker_count()
    points = spec.point_values()

    done: dict[tuple[str, ...], SweepRow] = {}
    if spec.output_path and os.path.exists(spec.output_path):
        done = {
            tuple(kio.format_float(v) for v in row.values): row
            for row in kio.read_sweep_rows(spec.output_path, spec.axis_names)
        }

    todo = [p for p in points if tuple(kio.format_float(v) for v in p) not in done]

    computed: dict[tuple[str, ...], SweepRow] = {}
    if todo:
        jobs = [(spec, p) for p in todo]
        if worker_count == 1:
            results = [_solve_point(job) for job in jobs]
        else:
            # spawned workers keep numerics identical to in-process execution
            with ProcessPoolExecutor(
                max_workers=worker_count, mp_context=get_context("spawn")
            ) as pool:
                results = list(pool.map(_solve_point, jobs, chunksize=1))
        for row in results:
            computed[tuple(kio.format_float(v) for v in row.values)] = row

    rows = []
    for p in points:
        key = tuple(kio.format_float(v) for v in p)
        rows.append(done.get(key) or computed[key])

    result = SweepResult(spec=spec, rows=rows, version=__version__)
    if spec.output_path:
        kio.write_sweep_result(spec.output_path, result)
    return result


@dataclass
class ConvergenceRow:
    n_cut: int
    negativity: float
    mean_n: float
    tail_mass: float
    converged: bool


@dataclass
class ConvergenceScan:
    rows: list[ConvergenceRow]
    converged_at: int | None


def convergence_scan(params: ModelParams, cutoffs: list[int], resolution: int = 160) -> ConvergenceScan:
    """Negativity and tail mass against the Fock cutoff.

    A cutoff is flagged converged when the negativity moved by less than 1%
    relative from the previous cutoff (with a 1e-4 absolute escape, the
    no-negativity scale, since relative change is meaningless around zero)
    and the tail mass is below 1e-6. Non-convergence is a reported
    outcome, not an error.
    """
    if list(cutoffs) != sorted(set(cutoffs)):
        raise ValidationError("cutoffs must be strictly increasing")
    rows: list[ConvergenceRow] = []
    previous = None
    converged_at = None
    for n_cut in cutoffs:
        p = params.replace(n_cut=int(n_cut))
        result = solve_steady_direct(p, tail_tol=1.0)  # tail reported, not fatal here
        obs = observables(result.rho)
        neg = negativity_of_state(result.rho, resolution=resolution)
        converged = False
        if previous is not None:
            delta = abs(neg - previous)
            rel = delta / max(abs(neg), 1e-12)
            converged = (delta < 1e-4 or rel < 0.01) and abs(obs["tail_mass"]) < 1e-6
        rows.append(ConvergenceRow(int(n_cut), neg, obs["mean_n"], obs["tail_mass"], converged))
        if converged and converged_at is None:
            converged_at = int(n_cut)
        previous = neg
    return ConvergenceScan(rows=rows, converged_at=converged_at)
