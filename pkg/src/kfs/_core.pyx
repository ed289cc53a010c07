# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels: master-equation right-hand side and Wigner evaluation.

Same contracts as kfs._kernels_py; the RHS fuses every term into one pass
over the matrix, the Wigner evaluator runs the diagonal Clenshaw series
per point without temporaries.
"""

import numpy as np

cimport cython
from libc.math cimport exp, sqrt

ctypedef double complex cplx

cdef double TWO_OVER_PI = 0.63661977236758134308


def rhs_apply(rho, hdiag, pump, gamma, deph, drift, sq, out=None):
    rho = np.ascontiguousarray(rho, dtype=np.complex128)
    if out is None:
        out = np.empty_like(rho)
    _rhs(rho, np.ascontiguousarray(hdiag, dtype=np.float64),
         complex(pump), float(gamma), float(deph), float(drift),
         np.ascontiguousarray(sq, dtype=np.float64), out)
    return out


cdef void _rhs(cplx[:, ::1] rho, double[::1] hdiag, cplx pump,
               double gamma, double deph, double drift,
               double[::1] sq, cplx[:, ::1] out) noexcept nogil:
    cdef Py_ssize_t D = rho.shape[0]
    cdef Py_ssize_t n, m
    cdef double dnm, dnm2
    cdef cplx acc, offd
    cdef cplx I = 1j
    cdef cplx pc = pump.conjugate()
    cdef bint has_pump = pump != 0.0
    cdef bint has_gamma = gamma != 0.0
    cdef bint has_deph = deph != 0.0
    cdef bint has_drift = drift != 0.0

    for n in range(D):
        for m in range(D):
            acc = I * (hdiag[n] - hdiag[m]) * rho[n, m]
            if has_pump:
                if n > 0:
                    acc = acc + I * pump * sq[n] * rho[n - 1, m]
                if n + 1 < D:
                    acc = acc + I * pc * sq[n + 1] * rho[n + 1, m]
                if m + 1 < D:
                    acc = acc - I * pump * sq[m + 1] * rho[n, m + 1]
                if m > 0:
                    acc = acc - I * pc * sq[m] * rho[n, m - 1]
            if has_gamma:
                acc = acc - 0.5 * gamma * (n + m) * rho[n, m]
                if n + 1 < D and m + 1 < D:
                    acc = acc + gamma * sq[n + 1] * sq[m + 1] * rho[n + 1, m + 1]
            dnm = <double>(n - m)
            if has_deph:
                # exact integer square first: matches deph*(n-m)**2*rho bit for bit
                dnm2 = <double>((n - m) * (n - m))
                acc = acc - deph * dnm2 * rho[n, m]
            if has_drift:
                offd = 0.0
                if n + 1 < D:
                    offd = offd + sq[n + 1] * rho[n + 1, m]
                if m + 1 < D:
                    offd = offd + sq[m + 1] * rho[n, m + 1]
                acc = acc + I * drift * dnm * offd
            out[n, m] = acc


def wigner_eval(rho, xs, ps):
    rho = np.ascontiguousarray(rho, dtype=np.complex128)
    xs = np.ascontiguousarray(xs, dtype=np.float64).ravel()
    ps = np.ascontiguousarray(ps, dtype=np.float64).ravel()
    if xs.shape[0] != ps.shape[0]:
        raise ValueError("xs and ps must have the same length")
    D = rho.shape[0]
    # flag all-zero diagonals once instead of per point
    up_mask = np.zeros(D, dtype=np.int8)
    lo_mask = np.zeros(D, dtype=np.int8)
    for L in range(D):
        if np.any(np.diagonal(rho, offset=L)):
            up_mask[L] = 1
        if L > 0 and np.any(np.diagonal(rho, offset=-L)):
            lo_mask[L] = 1
    # the Clenshaw recursion factors depend on (L, k) only: build them once
    Lg, kg = np.meshgrid(np.arange(D, dtype=float), np.arange(D + 1, dtype=float),
                         indexing="ij")
    with np.errstate(divide="ignore", invalid="ignore"):
        f1 = np.sqrt((kg - 1.0) * (Lg + kg - 1.0) / ((Lg + kg) * kg))
        f2 = 1.0 / np.sqrt((Lg + kg) * kg)
    f1[~np.isfinite(f1)] = 0.0
    f2[~np.isfinite(f2)] = 0.0
    inv_sqrt = 1.0 / np.sqrt(np.arange(1.0, D + 1.0))
    out = np.empty(xs.shape[0], dtype=np.complex128)
    _wigner(rho, xs, ps, up_mask, lo_mask, f1, f2, inv_sqrt, out)
    return out


cdef enum:
    BLOCK = 8


cdef void _lag_block(cplx[:, ::1] rho, Py_ssize_t L, bint lower, double * B,
                     double[:, ::1] f1, double[:, ::1] f2, double isq,
                     Py_ssize_t nb, cplx * lag) noexcept nogil:
    """Clenshaw sum over one diagonal for a block of points.

    Evaluates sum_k c_k (-1)^k sqrt(L!k!/(L+k)!) Lag(k, L; B[b]) with the
    block giving the otherwise latency-bound recurrence independent chains
    to overlap.
    """
    cdef Py_ssize_t D = rho.shape[0]
    cdef Py_ssize_t ncoef = D - L
    cdef Py_ssize_t i, k, b
    cdef cplx y0[BLOCK]
    cdef cplx y1[BLOCK]
    cdef cplx t0, c, c0, c1
    cdef double a1, a2, lk

    if ncoef == 1:
        c0 = rho[L, 0] if lower else rho[0, L]
        for b in range(nb):
            lag[b] = c0
        return
    if ncoef == 2:
        c0 = rho[L, 0] if lower else rho[0, L]
        c1 = rho[D - 1, 1] if lower else rho[1, D - 1]
        for b in range(nb):
            lag[b] = c0 - c1 * ((L + 1) - B[b]) * isq
        return

    c0 = rho[D - 2, ncoef - 2] if lower else rho[ncoef - 2, D - 2]
    c1 = rho[D - 1, ncoef - 1] if lower else rho[ncoef - 1, D - 1]
    for b in range(nb):
        y0[b] = c0
        y1[b] = c1
    k = ncoef
    for i in range(3, ncoef + 1):
        k -= 1
        if lower:
            c = rho[ncoef - i + L, ncoef - i]
        else:
            c = rho[ncoef - i, ncoef - i + L]
        a1 = f1[L, k]
        a2 = f2[L, k]
        lk = <double>(L + 2 * k - 1)
        for b in range(nb):
            t0 = c - y1[b] * a1
            y1[b] = y0[b] - y1[b] * ((lk - B[b]) * a2)
            y0[b] = t0
    for b in range(nb):
        lag[b] = y0[b] - y1[b] * ((L + 1) - B[b]) * isq


cdef void _wigner(cplx[:, ::1] rho, double[::1] xs, double[::1] ps,
                  signed char[::1] up, signed char[::1] lo,
                  double[:, ::1] f1, double[:, ::1] f2, double[::1] inv_sqrt,
                  cplx[::1] out) noexcept nogil:
    cdef Py_ssize_t D = rho.shape[0]
    cdef Py_ssize_t npts = xs.shape[0]
    cdef Py_ssize_t j0, L, b, nb
    cdef double isq
    cdef double B[BLOCK]
    cdef cplx A2[BLOCK]
    cdef cplx cA2[BLOCK]
    cdef cplx w[BLOCK]
    cdef cplx wl[BLOCK]
    cdef cplx lag[BLOCK]
    cdef cplx I = 1j

    j0 = 0
    while j0 < npts:
        nb = npts - j0
        if nb > BLOCK:
            nb = BLOCK
        for b in range(nb):
            A2[b] = 2.0 * xs[j0 + b] + 2.0 * I * ps[j0 + b]
            cA2[b] = A2[b].conjugate()
            B[b] = 4.0 * (xs[j0 + b] * xs[j0 + b] + ps[j0 + b] * ps[j0 + b])
            w[b] = 0.0
            wl[b] = 0.0

        for L in range(D - 1, -1, -1):
            isq = inv_sqrt[L]
            if up[L]:
                _lag_block(rho, L, 0, B, f1, f2, isq, nb, lag)
                for b in range(nb):
                    w[b] = lag[b] + w[b] * A2[b] * isq
            else:
                for b in range(nb):
                    w[b] = w[b] * A2[b] * isq

        for L in range(D - 1, 0, -1):
            isq = inv_sqrt[L]
            if lo[L]:
                _lag_block(rho, L, 1, B, f1, f2, isq, nb, lag)
                for b in range(nb):
                    wl[b] = lag[b] + wl[b] * cA2[b] * isq
            else:
                for b in range(nb):
                    wl[b] = wl[b] * cA2[b] * isq

        for b in range(nb):
            out[j0 + b] = (w[b] + wl[b] * cA2[b]) * exp(-0.5 * B[b]) * TWO_OVER_PI
        j0 += nb
