"""Steady-state simulator for a pumped Kerr cavity with homodyne feedback.

Builds truncated-Fock-space operators, integrates or directly solves the
feedback master equation, evaluates Wigner distributions and their total
integrated negativity, and sweeps parameter grids. See README.md for the
command-line interface and file formats.
"""

__version__ = "0.1.0"

from .analysis import (
    PolaritonParams,
    coherent_steady_amplitude,
    dephased_mixture,
    effective_eta,
    estimate_interaction,
)
from .backend import backend_name
from .dynamics import (
    EvolutionConfig,
    SteadyStateResult,
    TimeSeries,
    evolve,
    observables,
    solve_steady_direct,
    solve_steady_evolved,
)
from .master import apply_rhs, build_liouvillian, rhs_norm, unvectorize, vectorize
from .operators import (
    annihilation_op,
    build_hamiltonian,
    coherent_dm,
    coherent_state,
    creation_op,
    fock_dm,
    fock_state,
    number_op,
    trace_distance,
    validate_density_matrix,
)
from .params import ModelParams, TermToggles
from .wigner import (
    PhaseSpaceGrid,
    WignerField,
    auto_grid,
    negativity,
    negativity_of_state,
    wigner_transform,
)

__all__ = [
    "ModelParams",
    "TermToggles",
    "EvolutionConfig",
    "TimeSeries",
    "SteadyStateResult",
    "PhaseSpaceGrid",
    "WignerField",
    "PolaritonParams",
    "annihilation_op",
    "creation_op",
    "number_op",
    "build_hamiltonian",
    "fock_state",
    "fock_dm",
    "coherent_state",
    "coherent_dm",
    "validate_density_matrix",
    "trace_distance",
    "apply_rhs",
    "build_liouvillian",
    "rhs_norm",
    "vectorize",
    "unvectorize",
    "evolve",
    "observables",
    "solve_steady_direct",
    "solve_steady_evolved",
    "wigner_transform",
    "negativity",
    "negativity_of_state",
    "auto_grid",
    "coherent_steady_amplitude",
    "dephased_mixture",
    "effective_eta",
    "estimate_interaction",
    "backend_name",
    "__version__",
]
