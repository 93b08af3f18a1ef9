"""Kernel backend selection.

The compiled sweep is preferred; the pure-Python twin is used when the
extension is unavailable or when ``TOPOPROMPT_PURE_PYTHON`` is set in the
environment (useful for cross-checking and benchmarking the two).
"""

import os

from . import _sweep_py

if os.environ.get("TOPOPROMPT_PURE_PYTHON"):
    _impl = _sweep_py
    KERNEL_BACKEND = "python"
else:
    try:
        from . import _sweep as _impl  # type: ignore[attr-defined]

        KERNEL_BACKEND = "cython"
    except ImportError:
        _impl = _sweep_py
        KERNEL_BACKEND = "python"

sweep = _impl.sweep

__all__ = ["sweep", "KERNEL_BACKEND"]
