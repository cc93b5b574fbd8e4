"""Backend selection for the hot kernels.

Set ``EXTRICAT_NUMBA=0`` in the environment to force the pure-numpy path.
The flag is read once, at import time.
"""

from __future__ import annotations

import os

_FLAG = os.environ.get("EXTRICAT_NUMBA", "1").strip().lower()

try:
    import numba as _numba
except ImportError:  # pragma: no cover - numba is a declared dependency
    _numba = None

HAVE_NUMBA = _numba is not None
USE_NUMBA = HAVE_NUMBA and _FLAG not in ("0", "false", "no", "off")


def njit(fn):
    """Compile ``fn`` with numba when it is available, else return it untouched.

    The loop kernels stay importable (and runnable, slowly) without numba so
    the two backends can be compared against each other in tests.
    """
    if not HAVE_NUMBA:
        return fn
    return _numba.njit(cache=True, nogil=True)(fn)


def backend_name() -> str:
    return "numba" if USE_NUMBA else "numpy"
