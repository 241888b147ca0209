"""Kernel selection: compiled extension when importable, else pure Python."""
from __future__ import annotations

import os

from . import _kernels_py

BACKEND = "python"
_kernels = _kernels_py

if os.environ.get("O1KEPLER_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _ckernels as _compiled
    except ImportError:  # extension not built
        pass
    else:
        _kernels = _compiled
        BACKEND = "cython"

laguerre_values = _kernels.laguerre_values
fock_lower_entries = _kernels.fock_lower_entries
fock_rank = _kernels.fock_rank
