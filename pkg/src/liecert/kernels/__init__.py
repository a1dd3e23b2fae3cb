"""Integer kernels over structure-constant tables.

The Cython build (``_ckernels``) is preferred; ``_pure`` is the fallback and
can be forced with ``LIECERT_PURE=1``.  ``BACKEND`` names the active one.
"""
from __future__ import annotations

import os

from . import _pure

if os.environ.get("LIECERT_PURE") == "1":
    _impl = _pure
    BACKEND = "python"
else:
    try:
        from . import _ckernels as _impl
        BACKEND = "cython"
    except ImportError:
        _impl = _pure
        BACKEND = "python"

jacobi_violations = _impl.jacobi_violations
killing_trace = _impl.killing_trace

__all__ = ["BACKEND", "jacobi_violations", "killing_trace", "_pure"]
