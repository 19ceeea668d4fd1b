"""Kernel backend selection: compiled extension if available, else pure Python.

Set ``SLOCCRANK_PURE=1`` to force the pure-Python fallback (useful for
benchmark comparisons and for debugging the compiled twin).
"""

import os

if os.environ.get("SLOCCRANK_PURE") == "1":
    from . import pure as _backend
else:
    try:
        from . import _core as _backend  # type: ignore[attr-defined]
    except ImportError:
        from . import pure as _backend

BACKEND = "pure" if _backend.__name__.endswith("pure") else "compiled"
bareiss = _backend.bareiss
apply_single_qubit = _backend.apply_single_qubit
