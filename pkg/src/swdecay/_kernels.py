"""Kernel backend selection.

The compiled extension is used when it imports; set the environment
variable ``SWDECAY_PURE_PYTHON=1`` to force the numpy fallback.
"""
import os

from . import _pykernels

BACKEND = "python"
if not os.environ.get("SWDECAY_PURE_PYTHON"):
    try:
        from . import _ckernels as _impl
        BACKEND = "cython"
    except ImportError:
        _impl = _pykernels
else:
    _impl = _pykernels

jn_table = _impl.jn_table
i0_i1x_scaled = _impl.i0_i1x_scaled
adiabatic_fields = _impl.adiabatic_fields

BACKENDS = {"python": _pykernels}
if BACKEND == "cython":
    BACKENDS["cython"] = _impl

__all__ = ["BACKEND", "BACKENDS", "jn_table", "i0_i1x_scaled", "adiabatic_fields"]
