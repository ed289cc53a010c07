"""Select the compiled kernels if available, else the NumPy fallback.

KFS_BACKEND=py forces the fallback, KFS_BACKEND=ext requires the compiled
extension (import error if it is missing); the default "auto" prefers the
extension. `backend_name()` reports which one is active.
"""

import os

from .errors import ConfigError

_requested = os.environ.get("KFS_BACKEND", "auto")
if _requested not in ("auto", "ext", "py"):
    raise ConfigError(f"KFS_BACKEND must be auto, ext, or py; got {_requested!r}")

if _requested == "py":
    from . import _kernels_py as _impl

    _name = "py"
else:
    try:
        from . import _core as _impl  # type: ignore[attr-defined]

        _name = "ext"
    except ImportError:
        if _requested == "ext":
            raise
        from . import _kernels_py as _impl

        _name = "py"

rhs_apply = _impl.rhs_apply
wigner_eval = _impl.wigner_eval


def backend_name() -> str:
    return _name
