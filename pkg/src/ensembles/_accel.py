"""Numba switch for the hot kernels.

Every kernel in :mod:`ensembles._kernels` is written in the subset of Python
that numba can compile. With ``ENSEMBLES_DISABLE_NUMBA=1`` in the environment
(or when numba is not importable) the decorator below is a no-op and the same
functions run as plain numpy/Python code.
"""

import os

_FLAG = "ENSEMBLES_DISABLE_NUMBA"


def _env_disabled() -> bool:
    return os.environ.get(_FLAG, "").strip().lower() in {"1", "true", "yes", "on"}


try:
    if _env_disabled():
        raise ImportError("numba disabled by " + _FLAG)
    from numba import njit as _numba_njit

    HAS_NUMBA = True
except ImportError:
    _numba_njit = None
    HAS_NUMBA = False


def njit(*args, **kwargs):
    """``numba.njit`` when available, identity otherwise.

    Usable bare (``@njit``) or with options (``@njit(cache=True)``).
    """
    if args and callable(args[0]) and len(args) == 1 and not kwargs:
        func = args[0]
        return _numba_njit(cache=True)(func) if HAS_NUMBA else func

    def wrap(func):
        if not HAS_NUMBA:
            return func
        kwargs.setdefault("cache", True)
        return _numba_njit(*args, **kwargs)(func)

    return wrap


def backend() -> str:
    return "numba" if HAS_NUMBA else "python"
