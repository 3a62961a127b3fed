"""Numba switch.

Every hot kernel in the package is decorated with :func:`njit` from this module.
Setting ``FASTPCST_DISABLE_NUMBA=1`` before import turns the decorator into a
no-op, so the same kernels run as plain Python over numpy arrays. That path
exists for debugging and for cross-checking the compiled kernels.
"""
import os

__all__ = ["njit", "NUMBA_ENABLED"]


def _disabled_by_env(value):
    return value.strip().lower() in ("1", "true", "yes", "on")


NUMBA_ENABLED = not _disabled_by_env(os.environ.get("FASTPCST_DISABLE_NUMBA", ""))

if NUMBA_ENABLED:
    try:
        import numba
    except ImportError:  # pragma: no cover
        NUMBA_ENABLED = False

if NUMBA_ENABLED:

    def njit(fn):
        return numba.njit(cache=True, nogil=True)(fn)

else:

    def njit(fn):
        return fn
