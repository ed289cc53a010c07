"""Truncated-Fock-space operators and states.

Convention: the ladder operator acts as <n-1|a|n> = sqrt(n), so the matrix
of `a` carries sqrt(1..D-1) on its first superdiagonal (entry (0,1) = 1).
Operators are plain truncations of the infinite-dimensional matrices; the
top Fock level simply loses probability upward, which the dynamics module
monitors through the tail mass.
"""

import numpy as np

from .errors import DimensionError, ValidationError
from .params import ModelParams


def annihilation_op(n_cut: int) -> np.ndarray:
    """Annihilation operator on the levels 0..n_cut-1."""
    if not isinstance(n_cut, int) or n_cut < 2:
        raise DimensionError(f"n_cut must be an integer >= 2, got {n_cut!r}")
    return np.diag(np.sqrt(np.arange(1.0, n_cut)), k=1).astype(complex)


def creation_op(n_cut: int) -> np.ndarray:
    return annihilation_op(n_cut).conj().T


def number_op(n_cut: int) -> np.ndarray:
    if not isinstance(n_cut, int) or n_cut < 2:
        raise DimensionError(f"n_cut must be an integer >= 2, got {n_cut!r}")
    return np.diag(np.arange(n_cut, dtype=float)).astype(complex)


def build_hamiltonian(params: ModelParams, hermitian_pump: bool = False) -> np.ndarray:
    """Assemble delta*n + A(e^{i theta} a+ -/+ e^{-i theta} a) + (u/2) a+a+aa.

    With the default sign (minus) the drive term is anti-hermitian, which is
    the form the amplitude equation of motion is usually quoted from; it is
    NOT usable as a generator on its own.  The evolution generator
    (kfs.master) uses hermitian_pump=True, the unique hermitian drive with
    the same amplitude equation d<a>/dt = i*delta*<a> + i*A*e^{i theta}
    - <a>/2, which also preserves density-matrix hermiticity.
    Each term is gated by its toggle.
    """
    D = params.n_cut
    t = params.toggles
    n = np.arange(D, dtype=float)
    H = np.zeros((D, D), dtype=complex)
    if t.hamiltonian:
        H += np.diag(params.delta * n)
    if t.kerr:
        H += np.diag(0.5 * params.u * n * (n - 1.0))
    if t.pump and params.amp != 0.0:
        p = params.amp * np.exp(1j * params.theta)
        a = annihilation_op(D)
        sign = 1.0 if hermitian_pump else -1.0
        H += p * a.conj().T + sign * np.conj(p) * a
    return H


def fock_state(n_cut: int, n: int) -> np.ndarray:
    if not 0 <= n < n_cut:
        raise DimensionError(f"Fock level {n} outside 0..{n_cut - 1}")
    v = np.zeros(n_cut, dtype=complex)
    v[n] = 1.0
    return v


def fock_dm(n_cut: int, n: int) -> np.ndarray:
    v = fock_state(n_cut, n)
    return np.outer(v, v.conj())


def coherent_state(n_cut: int, alpha: complex) -> np.ndarray:
    """Normalized truncation of the coherent state |alpha>.

    Amplitudes are built by the recurrence c_{n+1} = c_n * alpha/sqrt(n+1)
    (no factorials), then renormalized over the kept levels.
    """
    c = np.empty(n_cut, dtype=complex)
    c[0] = 1.0
    for n in range(1, n_cut):
        c[n] = c[n - 1] * alpha / np.sqrt(n)
    c *= np.exp(-0.5 * abs(alpha) ** 2)
    norm = np.linalg.norm(c)
    if norm == 0.0:
        raise ValidationError(f"coherent amplitude {alpha} too large for n_cut={n_cut}")
    return c / norm


def coherent_dm(n_cut: int, alpha: complex) -> np.ndarray:
    v = coherent_state(n_cut, alpha)
    return np.outer(v, v.conj())


def hermitize(rho: np.ndarray) -> np.ndarray:
    return 0.5 * (rho + rho.conj().T)


def validate_density_matrix(
    rho: np.ndarray,
    herm_tol: float = 1e-12,
    trace_tol: float = 1e-9,
    eig_tol: float = 1e-6,
) -> None:
    """Check hermiticity, unit trace, and positivity up to truncation noise."""
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise DimensionError(f"density matrix must be square, got shape {rho.shape}")
    herm = np.max(np.abs(rho - rho.conj().T))
    if herm > herm_tol:
        raise ValidationError(f"hermiticity defect {herm:.3e} exceeds {herm_tol:.1e}")
    tr = np.trace(rho)
    if abs(tr - 1.0) > trace_tol:
        raise ValidationError(f"trace {tr} deviates from 1 by more than {trace_tol:.1e}")
    min_eig = float(np.linalg.eigvalsh(hermitize(rho)).min())
    if min_eig < -eig_tol:
        raise ValidationError(f"minimum eigenvalue {min_eig:.3e} below -{eig_tol:.1e}")


def fidelity_with_pure(rho: np.ndarray, psi: np.ndarray) -> float:
    """<psi|rho|psi> for a normalized pure state psi."""
    return float(np.real(psi.conj() @ rho @ psi))


def trace_distance(rho_a: np.ndarray, rho_b: np.ndarray) -> float:
    """(1/2) * sum of |eigenvalues| of the hermitian difference."""
    diff = hermitize(rho_a) - hermitize(rho_b)
    return 0.5 * float(np.abs(np.linalg.eigvalsh(diff)).sum())
