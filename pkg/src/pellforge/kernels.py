"""Backend selection for the mod-p fiber scan.

The compiled ``_kernels`` extension is used when it imports; otherwise, or
when ``PELLFORGE_PURE_PYTHON`` is set, the pure-Python module stands in.
"""
from __future__ import annotations

import os

from . import _kernels_py

if os.environ.get("PELLFORGE_PURE_PYTHON"):
    _impl = _kernels_py
    BACKEND = "python"
else:
    try:
        from . import _kernels as _impl  # type: ignore[attr-defined]

        BACKEND = "cython"
    except ImportError:
        _impl = _kernels_py
        BACKEND = "python"

scan_fiber = _impl.scan_fiber
fiber_table = _impl.fiber_table
transform = _impl.transform

__all__ = ["BACKEND", "scan_fiber", "fiber_table", "transform"]
