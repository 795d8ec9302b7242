"""Kernel backend selection.

Imports the compiled kernels (`lnc._core`, built from Cython) when present,
falling back to the pure-Python twin `lnc._pycore`.  Set LNC_BACKEND=py to
force the fallback, LNC_BACKEND=c to require the compiled module.
"""

from __future__ import annotations

import os

_choice = os.environ.get("LNC_BACKEND", "").strip().lower()

if _choice == "py":
    from . import _pycore as core
elif _choice == "c":
    from . import _core as core  # type: ignore[no-redef]
else:
    try:
        from . import _core as core  # type: ignore[no-redef]
    except ImportError:
        from . import _pycore as core


def backend_name() -> str:
    """Active kernel backend: "c" (compiled) or "py" (pure Python)."""
    return core.BACKEND
