"""Numba/NumPy backend selection.

Hot kernels (Jacobi eigensolver, Monte Carlo cluster sampling) are compiled
with numba unless the environment variable LAMPERC_NO_NUMBA is set to a
truthy value, in which case pure-NumPy fallbacks are used.  The selection is
made once at import time.
"""

import os

_flag = os.environ.get("LAMPERC_NO_NUMBA", "").strip().lower()
USE_NUMBA = _flag not in ("1", "true", "yes", "on") if _flag else True

if USE_NUMBA:
    try:
        from numba import njit
    except ImportError:  # pragma: no cover
        USE_NUMBA = False

if not USE_NUMBA:
    def njit(*args, **kwargs):
        """Identity decorator standing in for numba.njit."""
        if args and callable(args[0]):
            return args[0]

        def wrap(func):
            return func

        return wrap


def backend_name():
    return "numba" if USE_NUMBA else "numpy"
