"""Backend selection for the numeric kernels.

Set ``STEPODE_DISABLE_NUMBA=1`` to force the pure-numpy kernels. The numba
backend is also skipped silently when numba cannot be imported.
"""

import os

_FALSY = {"", "0", "false", "no", "off"}


def _env_disabled() -> bool:
    return os.environ.get("STEPODE_DISABLE_NUMBA", "").strip().lower() not in _FALSY


try:
    import numba

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None
    HAVE_NUMBA = False

USE_NUMBA = HAVE_NUMBA and not _env_disabled()


def njit(func):
    """``numba.njit(cache=True)`` when numba is importable, else identity.

    Compilation is lazy, so decorating does not cost anything when the numpy
    backend is selected.
    """
    if not HAVE_NUMBA:
        return func
    return numba.njit(cache=True, nogil=True)(func)
