"""Time evolution and steady states of the feedback master equation.

evolve() integrates with a classic fixed-step 4th-order scheme and a
step-halving error estimate at the recording points; solve_steady_direct()
solves L vec(rho) = 0 with the trace-one row substituted into the sparse
vectorized generator. The two routes are independent and are cross-checked
against each other by the tests.
"""

import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.sparse.linalg import splu

from .errors import CutoffError, DegenerateSteadyStateError, DimensionError, DivergenceError, ValidationError
from .master import apply_rhs, build_liouvillian, rhs_coefficients, unvectorize, vectorize
from .operators import fock_dm, hermitize, validate_density_matrix
from .params import ModelParams


@dataclass(frozen=True)
class EvolutionConfig:
    dt: float = 1e-3          # step, units of 1/gamma
    t_max: float = 50.0       # horizon
    record_every: int = 100   # sampling stride, in steps
    ss_tol: float = 1e-8      # steady-state threshold on ||drho/dt||_F
    tail_tol: float = 1e-6    # max population in the top 10% of levels

    def __post_init__(self):
        if not self.dt > 0:
            raise ValidationError(f"dt must be positive, got {self.dt}")
        if self.t_max < self.dt:
            raise ValidationError(f"t_max={self.t_max} smaller than dt={self.dt}")
        if not self.ss_tol > 0:
            raise ValidationError(f"ss_tol must be positive, got {self.ss_tol}")
        if not isinstance(self.record_every, int) or self.record_every < 1:
            raise ValidationError(f"record_every must be a positive integer, got {self.record_every}")


@dataclass
class TimeSeries:
    """Observables sampled along an evolution (all arrays share length)."""

    times: np.ndarray
    mean_n: np.ndarray
    mean_a: np.ndarray
    purity: np.ndarray
    negativity: np.ndarray | None = None
    snapshots: list | None = None
    # diagnostics, sampled at the same instants
    trace_dev: np.ndarray | None = None
    herm_dev: np.ndarray | None = None
    min_eig: np.ndarray | None = None
    steady_time: float | None = None   # set when ||drho/dt|| fell below ss_tol
    step_error: float | None = None    # max step-halving deviation seen


@dataclass
class SteadyStateResult:
    rho: np.ndarray
    residual: float
    method: str                # "direct" or "evolved"
    converged: bool
    tail_mass: float
    herm_correction: float = 0.0
    min_eig: float = 0.0


def observables(rho: np.ndarray) -> dict:
    """mean_n, mean_a, purity and tail mass of a state."""
    D = rho.shape[0]
    n = np.arange(D, dtype=float)
    diag = np.diagonal(rho)
    mean_n = float(np.real(np.sum(n * diag)))
    sq = np.sqrt(np.arange(1.0, D))
    mean_a = complex(np.sum(sq * np.diagonal(rho, offset=-1)))
    purity = float(np.real(np.einsum("ij,ji->", rho, rho)))
    k = max(1, D // 10)
    tail_mass = float(np.real(np.sum(diag[D - k:])))
    return {"mean_n": mean_n, "mean_a": mean_a, "purity": purity, "tail_mass": tail_mass}


def _rk4_step(params, rho, dt, k1, k2, k3, k4, tmp):
    np.multiply(k1, 0.5 * dt, out=tmp)
    tmp += rho
    apply_rhs(params, tmp, out=k2)
    np.multiply(k2, 0.5 * dt, out=tmp)
    tmp += rho
    apply_rhs(params, tmp, out=k3)
    np.multiply(k3, dt, out=tmp)
    tmp += rho
    apply_rhs(params, tmp, out=k4)
    k2 += k3
    k2 *= 2.0
    k2 += k1
    k2 += k4
    k2 *= dt / 6.0
    return rho + k2


def _advance(params, rho, dt, nsteps):
    """nsteps plain RK4 steps (used for the step-halving estimate)."""
    k1 = np.empty_like(rho)
    k2 = np.empty_like(rho)
    k3 = np.empty_like(rho)
    k4 = np.empty_like(rho)
    tmp = np.empty_like(rho)
    for _ in range(nsteps):
        apply_rhs(params, rho, out=k1)
        rho = _rk4_step(params, rho, dt, k1, k2, k3, k4, tmp)
    return rho


def evolve(
    rho0: np.ndarray,
    params: ModelParams,
    config: EvolutionConfig | None = None,
    *,
    track_negativity: bool = False,
    track_min_eig: bool = False,
    keep_snapshots: bool = False,
    estimate_step_error: bool = True,
    validate: bool = True,
) -> tuple[TimeSeries, np.ndarray]:
    """Integrate from rho0; returns the sampled series and the final state.

    Stops at t_max or as soon as the steady-state residual drops below
    config.ss_tol, whichever comes first. Aborts with DivergenceError when
    entries blow up or the trace drifts beyond 1e-6, and with CutoffError
    when the top of the Fock ladder accumulates more than config.tail_tol.
    """
    if config is None:
        config = EvolutionConfig()
    c = rhs_coefficients(params)
    if rho0.shape != (c.dim, c.dim):
        raise DimensionError(f"rho0 shape {rho0.shape} does not match n_cut={c.dim}")
    if validate:
        validate_density_matrix(rho0)

    rho = np.ascontiguousarray(rho0, dtype=complex).copy()
    dt = config.dt
    nsteps = max(1, int(round(config.t_max / dt)))
    stride = config.record_every

    k1 = np.empty_like(rho)
    k2 = np.empty_like(rho)
    k3 = np.empty_like(rho)
    k4 = np.empty_like(rho)
    tmp = np.empty_like(rho)

    if track_negativity:
        from .wigner import negativity_of_state

    times = [0.0]
    mean_n, mean_a, purity = [], [], []
    negativities = [] if track_negativity else None
    snapshots = [rho.copy()] if keep_snapshots else None
    trace_dev, herm_dev = [], []
    min_eigs = [] if track_min_eig else None
    steady_time = None
    step_error = None

    def _record(t, state):
        obs = observables(state)
        mean_n.append(obs["mean_n"])
        mean_a.append(obs["mean_a"])
        purity.append(obs["purity"])
        trace_dev.append(abs(np.trace(state) - 1.0))
        herm_dev.append(float(np.max(np.abs(state - state.conj().T))))
        if min_eigs is not None:
            min_eigs.append(float(np.linalg.eigvalsh(hermitize(state)).min()))
        if negativities is not None:
            negativities.append(negativity_of_state(state, refine=False, validate=False))
        if snapshots is not None and t > 0.0:
            snapshots.append(state.copy())

    _record(0.0, rho)

    step = 0
    while step < nsteps:
        will_record = (step + 1) % stride == 0 or step + 1 == nsteps
        before = rho.copy() if (estimate_step_error and will_record) else None
        apply_rhs(params, rho, out=k1)
        rho = _rk4_step(params, rho, dt, k1, k2, k3, k4, tmp)
        step += 1

        if step % stride == 0 or step == nsteps:
            t = step * dt
            peak = float(np.max(np.abs(rho)))
            if not np.isfinite(peak) or peak > 1e3:
                raise DivergenceError(
                    f"entries reached {peak:.2e} at t={t:.4g}; dt={dt:g} is unstable, reduce it"
                )
            drift = abs(np.trace(rho) - 1.0)
            if drift > 1e-6:
                raise DivergenceError(
                    f"trace drifted by {drift:.2e} at t={t:.4g} (dt={dt:g})"
                )
            obs_tail = observables(rho)["tail_mass"]
            if obs_tail > config.tail_tol:
                raise CutoffError(
                    f"tail mass {obs_tail:.2e} exceeds {config.tail_tol:g} at t={t:.4g}; "
                    f"n_cut={params.n_cut} is too small for this drive"
                )
            if estimate_step_error:
                halved = _advance(params, before, 0.5 * dt, 2)
                err = float(np.max(np.abs(halved - rho)))
                step_error = err if step_error is None else max(step_error, err)

            times.append(t)
            _record(t, rho)

            residual = float(np.linalg.norm(apply_rhs(params, rho)))
            if residual < config.ss_tol:
                steady_time = t
                break

    series = TimeSeries(
        times=np.asarray(times),
        mean_n=np.asarray(mean_n),
        mean_a=np.asarray(mean_a),
        purity=np.asarray(purity),
        negativity=np.asarray(negativities) if negativities is not None else None,
        snapshots=snapshots,
        trace_dev=np.asarray(trace_dev),
        herm_dev=np.asarray(herm_dev),
        min_eig=np.asarray(min_eigs) if min_eigs is not None else None,
        steady_time=steady_time,
        step_error=step_error,
    )
    return series, rho


def solve_steady_direct(
    params: ModelParams,
    max_dim: int = 128,
    resid_tol: float = 1e-8,
    tail_tol: float = 1e-6,
) -> SteadyStateResult:
    """Steady state from the sparse vectorized generator.

    One row of L vec(rho) = 0 is replaced by the unit-trace constraint; the
    solution is hermitized (the correction size is reported) and the
    residual is measured against the unmodified generator. A residual above
    resid_tol raises DegenerateSteadyStateError rather than returning a
    silently bad state; population stuck on the top of the ladder beyond
    tail_tol raises CutoffError (the answer would be a truncation
    artifact). Positivity failures beyond the truncation tolerance are
    flagged with a warning, not an error.
    """
    D = params.n_cut
    L = build_liouvillian(params, max_dim=max_dim)

    M = L.tolil(copy=True)
    M.rows[0] = list(range(0, D * D, D + 1))   # diagonal entries in column-major order
    M.data[0] = [1.0 + 0.0j] * D
    b = np.zeros(D * D, dtype=complex)
    b[0] = 1.0

    try:
        lu = splu(M.tocsc())
        v = lu.solve(b)
    except RuntimeError as exc:
        raise DegenerateSteadyStateError(f"steady-state system is singular: {exc}") from exc
    if not np.all(np.isfinite(v)):
        raise DegenerateSteadyStateError("steady-state solve produced non-finite entries")

    raw = unvectorize(v)
    herm_correction = 0.5 * float(np.max(np.abs(raw - raw.conj().T)))
    rho = hermitize(raw)
    tr = float(np.real(np.trace(rho)))
    if abs(tr) < 1e-12:
        raise DegenerateSteadyStateError("steady-state solve returned a traceless matrix")
    rho /= tr

    residual = float(np.linalg.norm(L @ vectorize(rho)))
    if residual > resid_tol:
        raise DegenerateSteadyStateError(
            f"steady-state residual {residual:.2e} exceeds {resid_tol:g}; "
            "the system is ill conditioned or degenerate"
        )

    min_eig = float(np.linalg.eigvalsh(rho).min())
    if min_eig < -1e-6:
        warnings.warn(
            f"steady state has minimum eigenvalue {min_eig:.2e}; "
            "the averaged feedback description may be outside its validity range here",
            stacklevel=2,
        )
    tail = observables(rho)["tail_mass"]
    if tail > tail_tol:
        raise CutoffError(
            f"steady state parks {tail:.2e} of its mass on the top 10% of levels; "
            f"n_cut={D} is too small for this drive"
        )
    return SteadyStateResult(
        rho=rho,
        residual=residual,
        method="direct",
        converged=True,
        tail_mass=tail,
        herm_correction=herm_correction,
        min_eig=min_eig,
    )


def solve_steady_evolved(
    params: ModelParams,
    config: EvolutionConfig | None = None,
    rho0: np.ndarray | None = None,
) -> SteadyStateResult:
    """Steady state by integrating from rho0 (vacuum by default)."""
    if config is None:
        config = EvolutionConfig()
    if rho0 is None:
        rho0 = fock_dm(params.n_cut, 0)
    series, rho = evolve(rho0, params, config, estimate_step_error=False)
    residual = float(np.linalg.norm(apply_rhs(params, rho)))
    return SteadyStateResult(
        rho=rho,
        residual=residual,
        method="evolved",
        converged=series.steady_time is not None,
        tail_mass=observables(rho)["tail_mass"],
        min_eig=float(np.linalg.eigvalsh(hermitize(rho)).min()),
    )
