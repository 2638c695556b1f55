"""Search-kernel selection: compiled extension when available, else pure Python.

Set IMMERSION_EP_BACKEND=py (or =c) to force a backend; forcing the compiled
kernel raises if the extension was not built.
"""

import os

from . import _search_py

_forced = os.environ.get("IMMERSION_EP_BACKEND", "").strip().lower()

if _forced == "py":
    _impl = _search_py
    BACKEND = "python"
else:
    try:
        from . import _search_c as _impl  # type: ignore[attr-defined]

        BACKEND = "compiled"
    except ImportError:
        if _forced == "c":
            raise
        _impl = _search_py
        BACKEND = "python"

COMPLETE = _search_py.COMPLETE
BUDGET = _search_py.BUDGET

search_models = _impl.search_models


def available_backends():
    out = {"python": _search_py.search_models}
    try:
        from . import _search_c  # type: ignore[attr-defined]

        out["compiled"] = _search_c.search_models
    except ImportError:
        pass
    return out
