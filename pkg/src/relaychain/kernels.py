"""Backend selection for the hot kernels.

The compiled extension is used when importable. Setting the environment
variable ``RELAYCHAIN_PURE_PYTHON=1`` forces the pure-Python fallback.
"""
import os

from . import _kernels_py

if os.environ.get("RELAYCHAIN_PURE_PYTHON", "") not in ("", "0"):
    _impl = _kernels_py
else:
    try:
        from . import _kernels as _impl
    except ImportError:
        _impl = _kernels_py

BACKEND = "compiled" if _impl is not _kernels_py else "python"

cholesky = _impl.cholesky
log_det = _impl.log_det
min_rate_grid = _impl.min_rate_grid
