"""Numba switch.

Kernels in this package are written as plain loops over numpy arrays so the
same source runs compiled or interpreted. Set ``PCON_DISABLE_NUMBA=1`` before
import to get the interpreted path.
"""
import os

ENABLE_NUMBA = os.environ.get("PCON_DISABLE_NUMBA", "0").lower() not in ("1", "true", "yes")
CACHE_NUMBA = os.environ.get("PCON_NUMBA_CACHE", "1") == "1"

if ENABLE_NUMBA:
    try:
        import numba
    except ImportError:  # pragma: no cover
        ENABLE_NUMBA = False


def njit(func):
    if ENABLE_NUMBA:
        return numba.njit(cache=CACHE_NUMBA)(func)
    return func


def py_func(kernel):
    """Interpreted version of a kernel, whichever mode is active."""
    return getattr(kernel, "py_func", kernel)
