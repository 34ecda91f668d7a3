"""Kernel dispatch: compiled Cython core when available, numpy otherwise.

Set the environment variable ``GRAPHENE_CS_PURE=1`` before import to force
the numpy path (used by the benchmark and by the equivalence tests).
"""
import os

from . import _pykernels

BACKEND = "python"

if not os.environ.get("GRAPHENE_CS_PURE"):
    try:
        from . import _ckernels as _impl
    except ImportError:
        _impl = _pykernels
    else:
        BACKEND = "cython"
else:
    _impl = _pykernels

hermite_table = _impl.hermite_table
spinor_fields = _impl.spinor_fields
# always numpy: the matrix product goes through BLAS
bilinear_sum = _pykernels.bilinear_sum

__all__ = ["BACKEND", "hermite_table", "spinor_fields", "bilinear_sum"]
