"""JIT switch for the numeric kernels.

Set ``FSCHANNEL_NO_JIT=1`` to run the pure-numpy implementations instead of
the numba-compiled ones. The flag is read once, at import time.
"""
import os

NO_JIT = os.environ.get("FSCHANNEL_NO_JIT", "").strip().lower() in {"1", "true", "yes", "on"}

try:
    import numba as nb
    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    HAVE_NUMBA = False

USE_JIT = HAVE_NUMBA and not NO_JIT


def njit(*args, **kwargs):
    """``numba.njit`` when available, identity decorator otherwise."""
    if HAVE_NUMBA:
        return nb.njit(*args, cache=True, **kwargs)
    if len(args) == 1 and callable(args[0]) and not kwargs:
        return args[0]
    return lambda func: func
