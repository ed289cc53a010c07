"""Exception hierarchy.

The CLI maps these onto exit codes: configuration / input problems -> 2,
numerical failures -> 3, resource guards (memory, cutoff) -> 4.
"""


class KfsError(Exception):
    """Base class for all package errors."""


class ConfigError(KfsError):
    """Bad configuration file, flag, or argument."""


class ValidationError(ConfigError):
    """A parameter set or state violates its invariants."""


class DimensionError(ValidationError):
    """Inconsistent or invalid Hilbert-space dimension."""


class NotApplicableError(ConfigError):
    """A closed-form result was requested outside its domain of validity."""


class DivergenceError(KfsError):
    """Time integration blew up; reduce the step size."""


class DegenerateSteadyStateError(KfsError):
    """The steady-state linear system is singular or ill conditioned."""


class GridTooSmallError(KfsError):
    """Phase-space grid does not capture the state (normalization breach)."""


class ResourceGuardError(KfsError):
    """A configured resource limit (memory, point budget) was exceeded."""


class CutoffError(ResourceGuardError):
    """Population reached the top of the Fock ladder; raise n_cut."""
