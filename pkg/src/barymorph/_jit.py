"""Numba switch.

Set ``BARYMORPH_DISABLE_NUMBA=1`` to force the pure-numpy kernels.  When numba
is not importable the numpy kernels are used regardless.
"""
import os

_FLAG = os.environ.get("BARYMORPH_DISABLE_NUMBA", "").strip().lower()

try:
    import numba
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None

USE_NUMBA = numba is not None and _FLAG not in ("1", "true", "yes", "on")


def njit(*args, **kwargs):
    """``numba.njit`` when numba is available, identity otherwise."""
    if numba is None:
        if len(args) == 1 and callable(args[0]) and not kwargs:
            return args[0]
        return lambda f: f
    return numba.njit(*args, **kwargs)
