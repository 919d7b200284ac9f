"""Numba switch for the hot kernels.

Kernels in :mod:`mult123._kernels` are written in the numba-compatible subset
of numpy. When numba is importable they are compiled with ``njit``; setting
``MULT123_DISABLE_NUMBA=1`` (or uninstalling numba) runs the very same code as
plain Python on numpy arrays. The flag is read once, at import time.
"""

from __future__ import annotations

import os

ENV_FLAG = "MULT123_DISABLE_NUMBA"


def _flag_set(value: str | None) -> bool:
    return (value or "").strip().lower() not in ("", "0", "false", "no", "off")


NUMBA_REQUESTED = not _flag_set(os.environ.get(ENV_FLAG))

try:
    if not NUMBA_REQUESTED:
        raise ImportError("disabled by " + ENV_FLAG)
    from numba import njit as _numba_njit

    NUMBA_ENABLED = True
except ImportError:
    _numba_njit = None
    NUMBA_ENABLED = False


def njit(func=None, **options):
    """``numba.njit(cache=True)`` when enabled, identity otherwise."""
    if func is None:
        return lambda f: njit(f, **options)
    if not NUMBA_ENABLED:
        return func
    options.setdefault("cache", True)
    return _numba_njit(**options)(func)


def backend() -> str:
    return "numba" if NUMBA_ENABLED else "python"
