"""NumPy implementations of the two hot kernels.

These are the import-time fallback for the compiled extension kfs._core and
must match it to rounding error; both are exercised by the test suite and
compared by benchmarks/bench_backends.py. The right-hand side uses only
elementwise products and index shifts (every operator involved is diagonal
or bidiagonal), so no matrix products appear anywhere.
"""

import numpy as np


def rhs_apply(rho, hdiag, pump, gamma, deph, drift, sq, out=None):
    """Generator of the feedback master equation applied to rho.

    hdiag : real diagonal of the hermitian Hamiltonian (detuning + Kerr),
    pump  : complex drive amplitude A*e^{i theta} (0 when toggled off),
    gamma : loss rate (0 or 1),
    deph  : dephasing rate lam**2/(2 eta),
    drift : feedback coefficient lam,
    sq    : precomputed sqrt(0..D) table, length D+1.
    """
    D = rho.shape[0]
    n = np.arange(D, dtype=float)
    col = sq[1:D][None, :]
    row = sq[1:D][:, None]

    acc = 1j * (hdiag[:, None] * rho - rho * hdiag[None, :])

    need_lower = pump != 0.0 or drift != 0.0
    if need_lower:
        # a*rho and rho*a+ share structure with the feedback drift term
        arho = np.zeros_like(rho)
        arho[:-1, :] = row * rho[1:, :]          # sqrt(n+1) rho_{n+1,m}
        rhoad = np.zeros_like(rho)
        rhoad[:, :-1] = rho[:, 1:] * col         # sqrt(m+1) rho_{n,m+1}

    if pump != 0.0:
        adrho = np.zeros_like(rho)
        adrho[1:, :] = row * rho[:-1, :]         # sqrt(n) rho_{n-1,m}
        rhoa = np.zeros_like(rho)
        rhoa[:, 1:] = rho[:, :-1] * col          # sqrt(m) rho_{n,m-1}
        pc = np.conj(pump)
        acc += 1j * (pump * adrho + pc * arho - pump * rhoad - pc * rhoa)

    if gamma != 0.0:
        acc -= (0.5 * gamma) * (n[:, None] + n[None, :]) * rho
        acc[:-1, :-1] += gamma * (sq[1:D, None] * sq[1:D][None, :]) * rho[1:, 1:]

    if deph != 0.0:
        acc -= deph * (n[:, None] - n[None, :]) ** 2 * rho

    if drift != 0.0:
        acc += 1j * drift * (n[:, None] - n[None, :]) * (arho + rhoad)

    if out is None:
        return acc
    out[...] = acc
    return out


def _laguerre_series(L, x, c):
    """Clenshaw evaluation of sum_n c_n (-1)^n sqrt(L! n!/(L+n)!) Lag(n, L; x).

    x may be an array; c is the complex coefficient vector along one
    diagonal. The recursion never forms a factorial, which keeps the
    evaluation finite at large dimension and large |x|.
    """
    if len(c) == 1:
        y0 = c[0]
        y1 = 0.0
    elif len(c) == 2:
        y0 = c[0]
        y1 = c[1]
    else:
        k = len(c)
        y0 = c[-2]
        y1 = c[-1]
        for i in range(3, len(c) + 1):
            k -= 1
            y0, y1 = (
                c[-i] - y1 * (float((k - 1) * (L + k - 1)) / ((L + k) * k)) ** 0.5,
                y0 - y1 * ((L + 2 * k - 1) - x) * ((L + k) * k) ** -0.5,
            )
    return y0 - y1 * ((L + 1) - x) * (L + 1) ** -0.5


def wigner_eval(rho, xs, ps):
    """Wigner function of rho at the phase-space points alpha = xs + i*ps.

    Sums the displaced-parity matrix elements diagonal by diagonal with
    Horner/Clenshaw recurrences; upper and lower triangles are accumulated
    separately so the result is exactly the (complex) transform of the
    given matrix, and its imaginary part measures the hermiticity defect.
    Normalized so that integrating over dx dp gives Tr(rho).
    """
    D = rho.shape[0]
    A2 = 2.0 * (np.asarray(xs, dtype=float) + 1j * np.asarray(ps, dtype=float))
    B = (A2 * A2.conj()).real

    w = np.zeros_like(A2)
    for L in range(D - 1, -1, -1):
        diag = np.ascontiguousarray(np.diagonal(rho, offset=L))
        if np.any(diag):
            w = _laguerre_series(L, B, diag) + w * A2 * (L + 1) ** -0.5
        else:
            w = w * A2 * (L + 1) ** -0.5

    wl = np.zeros_like(A2)
    cA2 = A2.conj()
    for L in range(D - 1, 0, -1):
        diag = np.ascontiguousarray(np.diagonal(rho, offset=-L))
        if np.any(diag):
            wl = _laguerre_series(L, B, diag) + wl * cA2 * (L + 1) ** -0.5
        else:
            wl = wl * cA2 * (L + 1) ** -0.5
    w = w + wl * cA2

    return w * np.exp(-0.5 * B) * (2.0 / np.pi)
