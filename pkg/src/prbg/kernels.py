"""Kernel backend selection.

The compiled extension is used when it imports; otherwise the pure-Python
kernels take over. Set ``PRBG_PURE_PYTHON=1`` to force the fallback.
"""
from __future__ import annotations

import os

from . import _pykernels as python_backend

compiled_backend = None
if not os.environ.get("PRBG_PURE_PYTHON"):
    try:
        from . import _ckernels as compiled_backend  # type: ignore[no-redef]
    except ImportError:  # pragma: no cover - depends on the build
        compiled_backend = None

backend = compiled_backend if compiled_backend is not None else python_backend
BACKEND_NAME = "compiled" if compiled_backend is not None else "python"

fast_violation = backend.fast_violation
brute_violation = backend.brute_violation
max_prbg_search = backend.max_prbg_search
reach_tables = python_backend.reach_tables
path_back_edges = python_backend.path_back_edges
