"""Kernel backend selection.

The compiled ``_ckernels`` extension is used when it has been built;
otherwise the pure-Python ``_pykernels`` are used. Set
``NBCLIQUE_BACKEND=python`` to force the fallback.
"""
from __future__ import annotations

import os

from . import _pykernels

BACKEND = "python"
_impl = _pykernels

if os.environ.get("NBCLIQUE_BACKEND", "").lower() != "python":
    try:
        from . import _ckernels as _impl  # type: ignore[no-redef]

        BACKEND = "cython"
    except ImportError:
        pass

triangle_counts = _impl.triangle_counts
core_numbers = _impl.core_numbers
peel_order = _impl.peel_order
local_search = _impl.local_search


def get_backend(name: str):
    """Return the kernel module called ``name`` (``"python"`` or ``"cython"``)."""
    if name == "python":
        return _pykernels
    if name == "cython":
        from . import _ckernels

        return _ckernels
    raise ValueError(f"unknown backend {name!r}")
