"""Right-hand side of the feedback master equation and its vectorized form.

The generator, with gamma = hbar = 1 and every term gated by its toggle, is

    drho/dt =  i[H, rho]
             - (1/2) (a+a rho + rho a+a - 2 a rho a+)
             - (lam^2 / 2 eta) [a+a, [a+a, rho]]
             + i lam [a+a, a rho + rho a+]

with H = delta a+a + A(e^{i theta} a+ + e^{-i theta} a) + (u/2) a+a+aa.
The i[H, .] sign follows the amplitude equation of motion
d<a>/dt = i delta <a> + i A e^{i theta} - <a>/2, which the tests assert.
Note a rho + rho a+ is its own conjugate partner, so the drift term
preserves hermiticity as written.

Vectorization is column-major: vec(rho)[n + m*D] = rho[n, m], so
vec(A rho B) = (B^T kron A) vec(rho).
"""

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
import scipy.sparse as sp

from . import backend
from .errors import DimensionError, ResourceGuardError
from .operators import annihilation_op, build_hamiltonian
from .params import ModelParams

#: Largest dimension build_liouvillian accepts by default (D^2 x D^2 system).
DEFAULT_LIOUVILLIAN_GUARD = 128


@dataclass(frozen=True)
class RhsCoeffs:
    """Precomputed scalar/diagonal data consumed by the RHS kernels."""

    dim: int
    hdiag: np.ndarray   # real diagonal of the hermitian Hamiltonian
    pump: complex       # A e^{i theta}, zero when toggled off
    gamma: float        # 1.0 or 0.0
    deph: float         # lam^2/(2 eta)
    drift: float        # lam
    sq: np.ndarray      # sqrt(0..D)


@lru_cache(maxsize=64)
def rhs_coefficients(params: ModelParams) -> RhsCoeffs:
    D = params.n_cut
    t = params.toggles
    n = np.arange(D, dtype=float)
    hdiag = np.zeros(D)
    if t.hamiltonian:
        hdiag += params.delta * n
    if t.kerr:
        hdiag += 0.5 * params.u * n * (n - 1.0)
    pump = params.amp * np.exp(1j * params.theta) if t.pump else 0.0
    gamma = 1.0 if t.lindblad else 0.0
    deph = params.lam**2 / (2.0 * params.eta) if t.dephasing else 0.0
    drift = params.lam if t.feedback_drift else 0.0
    sq = np.sqrt(np.arange(D + 1, dtype=float))
    return RhsCoeffs(D, hdiag, complex(pump), gamma, deph, drift, sq)


def apply_rhs(params: ModelParams, rho: np.ndarray, out: np.ndarray | None = None) -> np.ndarray:
    """drho/dt for the given state; pure function of (params, rho)."""
    c = rhs_coefficients(params)
    if rho.shape != (c.dim, c.dim):
        raise DimensionError(f"state shape {rho.shape} does not match n_cut={c.dim}")
    rho = np.ascontiguousarray(rho, dtype=complex)
    return backend.rhs_apply(rho, c.hdiag, c.pump, c.gamma, c.deph, c.drift, c.sq, out)


def rhs_norm(params: ModelParams, rho: np.ndarray) -> float:
    """Frobenius norm of drho/dt, the steady-state residual of a state."""
    return float(np.linalg.norm(apply_rhs(params, rho)))


def vectorize(rho: np.ndarray) -> np.ndarray:
    return rho.reshape(-1, order="F")


def unvectorize(v: np.ndarray) -> np.ndarray:
    D = int(round(np.sqrt(v.size)))
    return v.reshape((D, D), order="F")


def build_liouvillian(params: ModelParams, max_dim: int = DEFAULT_LIOUVILLIAN_GUARD) -> sp.csc_matrix:
    """Sparse D^2 x D^2 matrix L with unvectorize(L @ vec(rho)) = apply_rhs(params, rho)."""
    D = params.n_cut
    if D > max_dim:
        raise ResourceGuardError(
            f"n_cut={D} exceeds the Liouvillian guard ({max_dim}); "
            "use time evolution or raise max_dim"
        )
    t = params.toggles
    a = sp.csr_matrix(annihilation_op(D))
    ad = a.conj().T.tocsr()
    num = (ad @ a).tocsr()
    eye = sp.identity(D, format="csr", dtype=complex)

    H = sp.csr_matrix(build_hamiltonian(params, hermitian_pump=True))
    L = 1j * (sp.kron(eye, H) - sp.kron(H.T, eye))

    if t.lindblad:
        L = L - 0.5 * (sp.kron(eye, num) + sp.kron(num.T, eye)) + sp.kron(a, a)

    if t.dephasing and params.lam != 0.0:
        deph = params.lam**2 / (2.0 * params.eta)
        num2 = (num @ num).tocsr()
        L = L - deph * (sp.kron(eye, num2) + sp.kron(num2.T, eye) - 2.0 * sp.kron(num, num))

    if t.feedback_drift and params.lam != 0.0:
        na = (num @ a).tocsr()
        L = L + 1j * params.lam * (
            sp.kron(eye, na) + sp.kron(a, num) - sp.kron(num, a) - sp.kron(na, eye)
        )

    return L.tocsc()
