"""Backend switch for the compiled kernels.

Set ``MWTREE_DISABLE_NUMBA=1`` before import to force the pure-numpy path.
"""
import os

_FLAG = os.environ.get("MWTREE_DISABLE_NUMBA", "").strip().lower()

try:
    if _FLAG in ("1", "true", "yes", "on"):
        raise ImportError("numba disabled by MWTREE_DISABLE_NUMBA")
    import numba as _nb

    NUMBA_AVAILABLE = True
except ImportError:
    _nb = None
    NUMBA_AVAILABLE = False


def njit(func):
    """Compile ``func`` with numba when enabled, else return it unchanged."""
    if _nb is None:
        return func
    return _nb.njit(cache=True)(func)


def backend_name():
    return "numba" if NUMBA_AVAILABLE else "numpy"
