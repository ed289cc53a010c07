"""Closed-form limits and physical parameter estimates.

The u = lam = 0 cavity has an exact coherent steady state; pure cavity
phase diffusion turns a coherent state into the diagonal Poisson mixture.
Both serve as oracles for the numerical solvers. The interaction-strength
and detection-efficiency helpers translate device parameters into the
dimensionless rates of ModelParams.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy import constants

from .errors import CutoffError, NotApplicableError, ValidationError
from .params import ModelParams

# CODATA values, one place only, so the estimate is reproducible bit for bit
ELEMENTARY_CHARGE = constants.e          # C
VACUUM_PERMITTIVITY = constants.epsilon_0  # F/m
EV = constants.electron_volt             # J


@dataclass(frozen=True)
class PolaritonParams:
    """Device-level inputs for the interaction estimate."""

    bohr_radius: float     # exciton Bohr radius, nm
    hopfield_x: float      # exciton fraction |X|, dimensionless
    permittivity: float    # relative permittivity epsilon/epsilon_0
    trap_area: float       # lateral confinement area, um^2

    def __post_init__(self):
        for name in ("bohr_radius", "permittivity", "trap_area"):
            if not getattr(self, name) > 0:
                raise ValidationError(f"{name} must be positive")
        if not 0.0 <= self.hopfield_x <= 1.0:
            raise ValidationError(f"hopfield_x must lie in [0, 1], got {self.hopfield_x}")


def coherent_steady_amplitude(params: ModelParams) -> complex:
    """Steady amplitude i*2*A*e^{i theta} of the linear (u = lam = 0) cavity.

    Magnitude 2A/gamma. For delta != 0 this is the amplitude in the frame
    rotating at delta; the lab-frame time dependence is not materialized.
    Raises NotApplicableError outside the linear regime.
    """
    if params.u != 0.0 or params.lam != 0.0:
        raise NotApplicableError(
            "closed-form amplitude requires u = 0 and lam = 0; "
            f"got u={params.u}, lam={params.lam}"
        )
    return 2j * params.amp * np.exp(1j * params.theta)


def dephased_mixture(alpha_mag: float, n_cut: int) -> np.ndarray:
    """Fully phase-diffused coherent state: diagonal Poisson weights.

    rho_nn = e^{-|alpha|^2} |alpha|^{2n} / n!, renormalized over the kept
    levels; requires the discarded tail to hold less than 1e-6 of the mass.
    """
    if alpha_mag < 0:
        raise ValidationError(f"alpha_mag must be nonnegative, got {alpha_mag}")
    if not isinstance(n_cut, int) or n_cut < 2:
        raise ValidationError(f"n_cut must be an integer >= 2, got {n_cut!r}")
    lam = alpha_mag**2
    w = np.empty(n_cut)
    w[0] = math.exp(-lam)
    for n in range(1, n_cut):
        w[n] = w[n - 1] * lam / n
    kept = float(w.sum())
    if 1.0 - kept > 1e-6:
        raise CutoffError(
            f"n_cut={n_cut} keeps only {kept:.8f} of the Poisson mass for |alpha|={alpha_mag}"
        )
    return np.diag(w / kept).astype(complex)


def effective_eta(eta0: float, r: float) -> float:
    """Effective detection efficiency eta0 * r of the homodyne arm.

    eta0 is the bare detector efficiency; r the reflectance of the
    beamsplitter diverting light into the homodyne measurement.
    """
    if not 0.0 < eta0 <= 1.0:
        raise ValidationError(f"eta0 must lie in (0, 1], got {eta0}")
    if not 0.0 <= r <= 1.0:
        raise ValidationError(f"reflectance must lie in [0, 1], got {r}")
    return eta0 * r


def estimate_interaction(p: PolaritonParams) -> float:
    """Interaction energy 30 e^2 a_B |X|^4 / (pi^3 epsilon A), in micro-eV."""
    a_b = p.bohr_radius * 1e-9          # m
    area = p.trap_area * 1e-12          # m^2
    eps = p.permittivity * VACUUM_PERMITTIVITY
    u_joule = 30.0 * ELEMENTARY_CHARGE**2 * a_b * p.hopfield_x**4 / (math.pi**3 * eps * area)
    return u_joule / EV * 1e6
