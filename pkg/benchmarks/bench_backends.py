"""Compare the compiled kernels against the NumPy fallback.

Times the two hot paths (master-equation right-hand side, Wigner grid
evaluation) at several ladder sizes and checks agreement while at it.

    python3 benchmarks/bench_backends.py
"""

import time

import numpy as np

from kfs import ModelParams
from kfs import _kernels_py
from kfs.master import rhs_coefficients

try:
    from kfs import _core
except ImportError:
    _core = None


def _time(fn, *args, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best, out


def bench_rhs(D, repeat=30):
    rng = np.random.default_rng(1)
    g = rng.normal(size=(D, D)) + 1j * rng.normal(size=(D, D))
    rho = 0.5 * (g + g.conj().T)
    rho /= np.trace(rho).real
    c = rhs_coefficients(
        ModelParams(u=0.3, delta=0.2, amp=2.0, theta=0.5, lam=0.6, eta=0.8, n_cut=D)
    )
    args = (rho, c.hdiag, c.pump, c.gamma, c.deph, c.drift, c.sq)
    t_py, ref = _time(_kernels_py.rhs_apply, *args, repeat=repeat)
    row = [f"rhs      D={D:<4d}", f"py {t_py * 1e3:8.3f} ms"]
    if _core is not None:
        t_ext, got = _time(_core.rhs_apply, *args, repeat=repeat)
        dev = np.max(np.abs(ref - got))
        row += [f"ext {t_ext * 1e3:8.3f} ms", f"x{t_py / t_ext:5.1f}", f"dev {dev:.1e}"]
    print("  ".join(row))


def bench_wigner(D, npts=16384, repeat=3):
    rng = np.random.default_rng(2)
    g = rng.normal(size=(D, D)) + 1j * rng.normal(size=(D, D))
    rho = g @ g.conj().T
    rho /= np.trace(rho).real
    xs = rng.uniform(-5, 5, npts)
    ps = rng.uniform(-5, 5, npts)
    t_py, ref = _time(_kernels_py.wigner_eval, rho, xs, ps, repeat=repeat)
    row = [f"wigner   D={D:<4d}", f"py {t_py * 1e3:8.1f} ms"]
    if _core is not None:
        t_ext, got = _time(_core.wigner_eval, rho, xs, ps, repeat=repeat)
        dev = np.max(np.abs(ref - got))
        row += [f"ext {t_ext * 1e3:8.1f} ms", f"x{t_py / t_ext:5.1f}", f"dev {dev:.1e}"]
    print("  ".join(row))


if __name__ == "__main__":
    if _core is None:
        print("compiled extension not available; timing the fallback only")
    print(f"wigner points: 16384")
    for D in (20, 50, 100):
        bench_rhs(D)
    for D in (20, 50, 100):
        bench_wigner(D)
