"""Select the kernel implementation at import time.

The compiled extension is preferred.  Setting ``WSDIRAC_PURE_PYTHON`` to a
non-empty value other than ``0`` forces the pure-Python fallback.
"""

from __future__ import annotations

import os

from . import _fallback

_force_python = os.environ.get("WSDIRAC_PURE_PYTHON", "") not in ("", "0")

if _force_python:
    impl = _fallback
    BACKEND = "python"
else:
    try:
        from . import _kernels as impl
        BACKEND = "compiled"
    except ImportError:  # extension not built
        impl = _fallback
        BACKEND = "python"

integrate = impl.integrate
jacobi_array = impl.jacobi_array


def available_backends() -> dict:
    """Map backend names to importable kernel modules."""
    out = {"python": _fallback}
    try:
        from . import _kernels
        out["compiled"] = _kernels
    except ImportError:
        pass
    return out
