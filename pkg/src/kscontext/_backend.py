"""Kernel backend selection.

The compiled module is used when it imports; ``KSCONTEXT_PURE=1`` forces the
pure-Python fallback.
"""
import os

from . import _kernels_py

kernels = _kernels_py
if os.environ.get("KSCONTEXT_PURE", "") not in ("1", "true", "yes"):
    try:
        from . import _kernels as kernels  # noqa: F811
    except ImportError:
        kernels = _kernels_py

BACKEND = kernels.BACKEND


def available_backends():
    out = {"python": _kernels_py}
    try:
        from . import _kernels
        out["cython"] = _kernels
    except ImportError:
        pass
    return out
