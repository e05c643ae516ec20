"""Kernel selection: the compiled extension when available, else pure Python.

Set ``P3ECP_PURE_PYTHON=1`` to force the fallback (the benchmark and the
equivalence tests do this to compare both).
"""

from __future__ import annotations

import os
import warnings

from . import _pykernels

COMPILED = False
_force_python = os.environ.get("P3ECP_PURE_PYTHON", "") not in ("", "0")

if not _force_python:
    try:
        from . import _ckernels as _impl

        COMPILED = True
    except ImportError:  # pragma: no cover - depends on the build
        warnings.warn(
            "compiled kernels unavailable, using the pure-Python fallback", RuntimeWarning, stacklevel=2
        )
        _impl = _pykernels
else:
    _impl = _pykernels

FlowNetwork = _impl.FlowNetwork
steiner_all_subsets = _impl.steiner_all_subsets
BACKEND = "cython" if COMPILED else "python"


def backends():
    """Available implementations, compiled first."""
    out = {"python": _pykernels}
    try:
        from . import _ckernels

        out = {"cython": _ckernels, **out}
    except ImportError:  # pragma: no cover
        pass
    return out
