"""Backend selection for the hot loops.

The compiled extension ``emitcorr._kernels`` is used when importable;
otherwise, or when the environment variable ``EMITCORR_PURE_PYTHON`` is
set to a non-empty value other than ``0``, the numpy implementation in
``emitcorr._fallback`` is used. ``BACKEND`` names the active one.
"""

import os

from . import _fallback

_force_python = os.environ.get("EMITCORR_PURE_PYTHON", "") not in ("", "0")

try:
    if _force_python:
        raise ImportError("pure-Python backend requested")
    from . import _kernels as _impl

    BACKEND = "compiled"
except ImportError:
    _impl = _fallback
    BACKEND = "python"

integrate_linear = _impl.integrate_linear
conditional_entropy = _impl.conditional_entropy
conditional_entropy_grid = _impl.conditional_entropy_grid


def compiled_available() -> bool:
    try:
        from . import _kernels  # noqa: F401
    except ImportError:
        return False
    return True
