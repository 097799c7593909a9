"""Kernel backend selection.

The compiled ``_core`` extension is used when importable; otherwise, or
when ``RRTEXPLORE_PURE_PYTHON`` is set to a non-empty value, the
pure-Python ``_pycore`` twin is used. Both expose the same functions.
"""

import os

from . import _pycore

if os.environ.get("RRTEXPLORE_PURE_PYTHON"):
    _impl = _pycore
    BACKEND = "python"
else:
    try:
        from . import _core as _impl

        BACKEND = "compiled"
    except ImportError:
        _impl = _pycore
        BACKEND = "python"

cast_scan = _impl.cast_scan
carve_scan = _impl.carve_scan
segment_free = _impl.segment_free
line_of_sight = _impl.line_of_sight
gain_count = _impl.gain_count
kd_insert = _impl.kd_insert
kd_nearest = _impl.kd_nearest
astar = _impl.astar
nearest_frontier_cell = _impl.nearest_frontier_cell


def backends():
    """Map of backend name to kernel module for every backend available here."""
    found = {"python": _pycore}
    try:
        from . import _core

        found["compiled"] = _core
    except ImportError:
        pass
    return found
