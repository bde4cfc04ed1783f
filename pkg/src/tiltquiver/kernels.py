"""Elimination kernel selection.

The compiled extension is used when it imports; otherwise the pure-Python
twin is used.  Setting ``TILTQUIVER_PURE=1`` forces the fallback.
"""
import os

from . import _kernels_py

BACKEND = "python"
rref_int = _kernels_py.rref_int
rref_mod = _kernels_py.rref_mod

if not os.environ.get("TILTQUIVER_PURE"):
    try:
        from . import _kernels as _compiled
    except ImportError:  # pragma: no cover - depends on the build
        _compiled = None
    if _compiled is not None:
        rref_int = _compiled.rref_int
        rref_mod = _compiled.rref_mod
        BACKEND = "cython"
