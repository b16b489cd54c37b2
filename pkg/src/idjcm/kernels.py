"""Kernel backend selection.

The compiled extension is used when it was built; otherwise the numpy
implementation is imported.  Set ``IDJCM_BACKEND=python`` to force the
fallback.
"""
import os

from . import _kernels_py

BACKEND = "python"
if os.environ.get("IDJCM_BACKEND", "").lower() != "python":
    try:
        from . import _kernels as _impl

        BACKEND = "cython"
    except ImportError:
        _impl = _kernels_py
else:
    _impl = _kernels_py

branch_amplitudes = _impl.branch_amplitudes
husimi_sample = _impl.husimi_sample
compensated_sum = _impl.compensated_sum
