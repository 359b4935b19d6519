"""Kernel backend selection.

The compiled extension is used when it was built; setting
``TRANSMON3D_PURE_PYTHON=1`` forces the NumPy implementation.
"""
import os

from . import _kernels_py

BACKEND = "python"
_impl = _kernels_py

if os.environ.get("TRANSMON3D_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _kernels as _compiled
    except ImportError:
        _compiled = None
    else:
        _impl = _compiled
        BACKEND = "cython"
else:
    _compiled = None

lindblad_rk4 = _impl.lindblad_rk4
ou_integrals = _impl.ou_integrals


def compiled_available() -> bool:
    try:
        from . import _kernels  # noqa: F401
    except ImportError:
        return False
    return True
