"""Kernel backend selection: compiled extension if available, numpy otherwise.

Set RGG_KERNEL=python to force the numpy fallback (used by the benchmark).
"""

import os

from . import _sliced_py

if os.environ.get("RGG_KERNEL", "").lower() == "python":
    _impl = _sliced_py
    BACKEND = "python"
else:
    try:
        from . import _sliced_cy as _impl
        BACKEND = "cython"
    except ImportError:
        _impl = _sliced_py
        BACKEND = "python"


def _as_c_contig(a):
    import numpy as np
    return np.ascontiguousarray(a, dtype=np.float64)


def sorted_w2_losses(zp, yp):
    """Per-projection sorted-W2 losses for (n_projections, batch) inputs."""
    return _impl.sorted_w2_losses(_as_c_contig(zp), _as_c_contig(yp))


def sorted_w2_grad(zp, yp):
    """Losses and d(loss)/d(zp) for (n_projections, batch) inputs."""
    return _impl.sorted_w2_grad(_as_c_contig(zp), _as_c_contig(yp))
