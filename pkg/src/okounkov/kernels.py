"""Kernel backend selection.

The compiled extension is preferred when importable; set the environment
variable ``OKOUNKOV_PURE_PYTHON=1`` to force the pure-Python kernels.
Both backends implement ``grow_counts`` / ``grow_sets`` over packed
integer codes; ``dispatch`` routes each call by whether the codes fit the
compiled backend's 64-bit limit.
"""

from __future__ import annotations

import os

from . import _speedups_py

_compiled = None
if not os.environ.get("OKOUNKOV_PURE_PYTHON"):
    try:
        from . import _speedups as _compiled  # type: ignore[no-redef]
    except ImportError:
        _compiled = None


def backend_name() -> str:
    return "compiled" if _compiled is not None else "python"


def backends():
    """All importable backends, compiled first (used by tests/benchmarks)."""
    out = []
    if _compiled is not None:
        out.append(_compiled)
    out.append(_speedups_py)
    return out


def dispatch(max_code: int):
    """Backend module able to handle codes up to ``max_code``."""
    if _compiled is not None and max_code <= _compiled.MAX_CODE:
        return _compiled
    return _speedups_py
