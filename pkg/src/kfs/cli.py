"""Command-line interface.

Subcommands: evolve, steady, wigner, sweep, estimate. Exit codes: 0 on
success, 2 for configuration problems, 3 for numerical failures, 4 when a
resource guard (memory, point budget, Fock cutoff) trips. KFS_THREADS
sets the default sweep worker count.
"""

from __future__ import annotations

import argparse
import os
import sys

from . import __version__, io as kio
from .analysis import PolaritonParams, effective_eta, estimate_interaction
from .dynamics import evolve, observables, solve_steady_direct
from .errors import (
    ConfigError,
    DegenerateSteadyStateError,
    DivergenceError,
    GridTooSmallError,
    KfsError,
    ResourceGuardError,
)
from .operators import fock_dm, validate_density_matrix
from .sweep import default_worker_count, run_sweep
from .wigner import auto_grid, negativity, wigner_transform

EXIT_CONFIG = 2
EXIT_NUMERICAL = 3
EXIT_RESOURCE = 4


def _exit_code(exc: KfsError) -> int:
    if isinstance(exc, ResourceGuardError):
        return EXIT_RESOURCE
    if isinstance(exc, (DivergenceError, DegenerateSteadyStateError, GridTooSmallError)):
        return EXIT_NUMERICAL
    return EXIT_CONFIG


def cmd_evolve(args) -> int:
    cfg = kio.load_run_config(args.config)
    os.makedirs(cfg.outputs, exist_ok=True)
    rho0 = fock_dm(cfg.model.n_cut, 0)
    series, rho = evolve(
        rho0, cfg.model, cfg.evolution, track_negativity=cfg.track_negativity
    )
    kio.write_timeseries(os.path.join(cfg.outputs, "timeseries.csv"), series)
    kio.save_state(os.path.join(cfg.outputs, "state.json"), rho)
    obs = observables(rho)
    status = "steady" if series.steady_time is not None else "t_max reached"
    print(f"evolved to t={series.times[-1]:g} ({status})")
    print(f"mean_n = {obs['mean_n']:.6f}")
    print(f"mean_a = {obs['mean_a'].real:.6f} {obs['mean_a'].imag:+.6f}i")
    print(f"purity = {obs['purity']:.6f}")
    return 0


def cmd_steady(args) -> int:
    cfg = kio.load_run_config(args.config)
    os.makedirs(cfg.outputs, exist_ok=True)
    result = solve_steady_direct(cfg.model)
    kio.save_state(os.path.join(cfg.outputs, "steady_state.json"), result.rho)
    obs = observables(result.rho)
    print(f"residual = {result.residual:.3e}")
    print(f"mean_n = {obs['mean_n']:.6f}")
    print(f"mean_a = {obs['mean_a'].real:.6f} {obs['mean_a'].imag:+.6f}i")
    print(f"purity = {obs['purity']:.6f}")
    print(f"tail_mass = {obs['tail_mass']:.3e}")
    print(f"min_eig = {result.min_eig:.3e}")
    print(f"hermitization_correction = {result.herm_correction:.3e}")
    return 0


def cmd_wigner(args) -> int:
    rho = kio.load_state(args.state)
    validate_density_matrix(rho)
    if args.auto or args.x_min is None:
        grid = auto_grid(rho, resolution=args.resolution)
    else:
        from .wigner import PhaseSpaceGrid

        grid = PhaseSpaceGrid(
            args.x_min, args.x_max, args.p_min, args.p_max, args.nx, args.np
        )
    field = wigner_transform(rho, grid)
    value = negativity(field)
    if args.out:
        kio.write_field(args.out, field)
        print(f"field written to {args.out}")
    print(f"grid = [{grid.x_min:g}, {grid.x_max:g}] x [{grid.p_min:g}, {grid.p_max:g}], "
          f"{grid.nx} x {grid.np}")
    print(f"normalization = {field.integral():.6f}")
    print(f"negativity = {value:.6f}")
    return 0


def cmd_sweep(args) -> int:
    spec = kio.load_sweep_spec(args.spec)
    if args.output:
        from dataclasses import replace

        spec = replace(spec, output_path=args.output)
    if spec.output_path is None:
        raise ConfigError("sweep needs an output path ('output' key or --output)")
    workers = args.workers if args.workers else default_worker_count()
    result = run_sweep(spec, worker_count=workers)
    failed = [r for r in result.rows if r.error]
    print(f"{len(result.rows)} points -> {spec.output_path} ({len(failed)} failed)")
    if args.timing_log:
        with open(args.timing_log, "w") as fh:
            for row in result.rows:
                fh.write(f"{row.values}\t{row.wall_time:.3f}\n")
    return 0


def cmd_estimate(args) -> int:
    if args.eta0 is not None or args.reflectance is not None:
        if args.eta0 is None or args.reflectance is None:
            raise ConfigError("--eta0 and --reflectance must be given together")
        eta = effective_eta(args.eta0, args.reflectance)
        print(f"eta = {eta:.6g}")
        return 0
    if None in (args.bohr_radius, args.hopfield, args.epsilon, args.trap_area):
        raise ConfigError(
            "estimate needs either --eta0/--reflectance or all of "
            "--bohr-radius/--hopfield/--epsilon/--trap-area"
        )
    p = PolaritonParams(
        bohr_radius=args.bohr_radius,
        hopfield_x=args.hopfield,
        permittivity=args.epsilon,
        trap_area=args.trap_area,
    )
    u = estimate_interaction(p)
    print(f"U = {u:.4g} ueV")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="kfs",
        description="Kerr cavity with homodyne-feedback phase locking: "
        "steady states, Wigner functions, negativity sweeps.",
    )
    parser.add_argument("--version", action="version", version=f"kfs {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("evolve", help="integrate the master equation from vacuum")
    p.add_argument("config", help="run configuration (JSON)")
    p.set_defaults(func=cmd_evolve)

    p = sub.add_parser("steady", help="solve the steady state directly")
    p.add_argument("config", help="run configuration (JSON)")
    p.set_defaults(func=cmd_steady)

    p = sub.add_parser("wigner", help="Wigner field and negativity of a stored state")
    p.add_argument("state", help="state file (JSON)")
    p.add_argument("--out", help="write the field as CSV")
    p.add_argument("--auto", action="store_true", help="infer grid bounds from the state")
    p.add_argument("--resolution", type=int, default=192, help="samples per axis for --auto")
    p.add_argument("--x-min", type=float, dest="x_min")
    p.add_argument("--x-max", type=float, dest="x_max")
    p.add_argument("--p-min", type=float, dest="p_min")
    p.add_argument("--p-max", type=float, dest="p_max")
    p.add_argument("--nx", type=int, default=192)
    p.add_argument("--np", type=int, default=192)
    p.set_defaults(func=cmd_wigner)

    p = sub.add_parser("sweep", help="run a parameter sweep")
    p.add_argument("spec", help="sweep specification (JSON)")
    p.add_argument("--workers", type=int, default=0,
                   help="worker processes (default: KFS_THREADS or 1)")
    p.add_argument("--output", help="override the output CSV path")
    p.add_argument("--timing-log", help="write per-point wall times here "
                                        "(kept out of the deterministic outputs)")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("estimate", help="device parameter helpers")
    p.add_argument("--bohr-radius", type=float, help="exciton Bohr radius (nm)")
    p.add_argument("--hopfield", type=float, help="exciton fraction |X|")
    p.add_argument("--epsilon", type=float, help="relative permittivity")
    p.add_argument("--trap-area", type=float, help="confinement area (um^2)")
    p.add_argument("--eta0", type=float, help="bare homodyne detector efficiency")
    p.add_argument("--reflectance", type=float, help="feedback beamsplitter reflectance")
    p.set_defaults(func=cmd_estimate)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except KfsError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return _exit_code(exc)


if __name__ == "__main__":
    sys.exit(main())
