"""Hot loops: all-pairs BFS and the compiled-formula evaluator.

The Cython build is used when it imported cleanly; otherwise (or with
``FLIPMC_PURE_PYTHON=1``) the pure-Python twin in :mod:`._pykernels` is used.
Both expose the same functions.
"""
import os

from flipmc._kernels import _pykernels

if os.environ.get("FLIPMC_PURE_PYTHON"):
    _impl = _pykernels
else:
    try:
        from flipmc._kernels import _ckernels as _impl
    except ImportError:
        _impl = _pykernels

BACKEND = "cython" if _impl is not _pykernels else "python"

all_pairs_bfs = _impl.all_pairs_bfs
Evaluator = _impl.Evaluator


def backends() -> dict:
    """All importable backends by name (used by tests and the benchmark)."""
    out = {"python": _pykernels}
    try:
        from flipmc._kernels import _ckernels

        out["cython"] = _ckernels
    except ImportError:
        pass
    return out
