"""Kernel backend selection.

The compiled extension `seqfpp._core` is preferred when importable; otherwise
the pure-numpy twin `seqfpp._core_py` is used. Set SEQFPP_BACKEND=python (or
=compiled) to force a choice; forcing the compiled backend raises if the
extension was not built.
"""

from __future__ import annotations

import os

_env = os.environ.get("SEQFPP_BACKEND", "auto").strip().lower()


def _load():
    if _env in ("python", "pure", "py"):
        from . import _core_py

        return _core_py
    if _env in ("compiled", "c", "ext"):
        from . import _core

        return _core
    try:
        from . import _core

        return _core
    except ImportError:
        from . import _core_py

        return _core_py


kernels = _load()
BACKEND = kernels.BACKEND_NAME


def available_backends() -> dict:
    """Map backend name -> kernel module, for benchmarks and twin tests."""
    from . import _core_py

    out = {"python": _core_py}
    try:
        from . import _core

        out["compiled"] = _core
    except ImportError:
        pass
    return out
