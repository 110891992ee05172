"""Pick the round-loop backend: the compiled extension if it imports, else pure Python.

Set ``GAMEREDESIGN_PURE_PYTHON=1`` to force the fallback.
"""

from __future__ import annotations

import os
from types import ModuleType

from . import _kernel_py

try:
    from . import _kernel as _compiled
except ImportError:  # extension not built
    _compiled = None

BACKENDS: dict[str, ModuleType] = {"python": _kernel_py}
if _compiled is not None:
    BACKENDS["cython"] = _compiled

if os.environ.get("GAMEREDESIGN_PURE_PYTHON", "") not in ("", "0"):
    DEFAULT_BACKEND = "python"
else:
    DEFAULT_BACKEND = "cython" if _compiled is not None else "python"


def get_backend(name: str | None = None) -> ModuleType:
    name = name or DEFAULT_BACKEND
    try:
        return BACKENDS[name]
    except KeyError:
        raise ValueError(f"backend {name!r} unavailable; have {sorted(BACKENDS)}") from None


def compiled_available() -> bool:
    return _compiled is not None
