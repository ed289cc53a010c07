"""Model parameters for the feedback-stabilized Kerr cavity.

All rates are dimensionless ratios with the cavity loss rate gamma set to 1
(and hbar = 1): u is the Kerr strength, delta the pump detuning, amp the
pump amplitude, lam the feedback coefficient, eta the effective homodyne
detection efficiency. Time is measured in units of 1/gamma. Angles are in
radians here; the JSON configs take degrees (see kfs.io).
"""

import math
from dataclasses import dataclass, field, fields

from .errors import ValidationError

#: Names of the independently switchable generator terms.
TERM_NAMES = ("hamiltonian", "pump", "kerr", "lindblad", "dephasing", "feedback_drift")


@dataclass(frozen=True)
class TermToggles:
    """On/off switches for the individual generator terms.

    `hamiltonian` gates the detuning term delta*n, `pump` the coherent
    drive, `kerr` the two-photon interaction, `lindblad` the cavity loss,
    `dephasing` the measurement back-action (lam**2/2 eta) double
    commutator and `feedback_drift` the i*lam feedback term. All on by
    default; switching terms off exists so each can be tested in isolation.
    """

    hamiltonian: bool = True
    pump: bool = True
    kerr: bool = True
    lindblad: bool = True
    dephasing: bool = True
    feedback_drift: bool = True

    @classmethod
    def none(cls) -> "TermToggles":
        return cls(**{name: False for name in TERM_NAMES})

    @classmethod
    def only(cls, *names: str) -> "TermToggles":
        unknown = set(names) - set(TERM_NAMES)
        if unknown:
            raise ValidationError(f"unknown term toggle(s): {sorted(unknown)}")
        return cls(**{name: name in names for name in TERM_NAMES})


@dataclass(frozen=True)
class ModelParams:
    """Physical rates of the feedback master equation, in units of gamma."""

    u: float = 0.0        # Kerr strength U/(hbar*gamma)
    delta: float = 0.0    # pump-cavity detuning Delta/gamma
    amp: float = 0.0      # pump amplitude A/gamma
    theta: float = 0.0    # pump phase, radians
    lam: float = 0.0      # feedback coefficient lambda/gamma
    eta: float = 1.0      # effective detection efficiency, in (0, 1]
    n_cut: int = 100      # Fock-space truncation dimension
    toggles: TermToggles = field(default_factory=TermToggles)

    def __post_init__(self):
        for f in fields(self):
            if f.name in ("n_cut", "toggles"):
                continue
            value = getattr(self, f.name)
            if not isinstance(value, (int, float)) or not math.isfinite(value):
                raise ValidationError(f"{f.name} must be a finite real number, got {value!r}")
        if not isinstance(self.n_cut, int) or isinstance(self.n_cut, bool):
            raise ValidationError(f"n_cut must be an integer, got {self.n_cut!r}")
        if self.n_cut < 2:
            raise ValidationError(f"n_cut must be >= 2, got {self.n_cut}")
        if not 0.0 < self.eta <= 1.0:
            raise ValidationError(f"eta must lie in (0, 1], got {self.eta}")
        if self.lam != 0.0 and self.eta <= 0.0:
            # redundant with the range check, kept for a precise message
            raise ValidationError("eta must be positive when lam is nonzero")

    def replace(self, **changes) -> "ModelParams":
        """Return a copy with the given scalar fields replaced."""
        from dataclasses import replace as _replace

        return _replace(self, **changes)


#: ModelParams fields a parameter sweep may scan over.
SCALAR_FIELDS = ("u", "delta", "amp", "theta", "lam", "eta", "n_cut")
