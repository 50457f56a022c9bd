"""Numba switch.

Set ``PROFQUAD_DISABLE_NUMBA=1`` to force the pure-numpy kernels. The flag is
read once at import time.
"""

import os

try:
    import numba
except ImportError:  # pragma: no cover
    numba = None

_flag = os.environ.get("PROFQUAD_DISABLE_NUMBA", "").strip().lower()
NUMBA_DISABLED = _flag not in ("", "0", "false", "no")
USE_NUMBA = numba is not None and not NUMBA_DISABLED


def njit(fn):
    """Compile ``fn`` in nopython mode with on-disk caching."""
    if numba is None:  # pragma: no cover
        raise RuntimeError("numba is not installed")
    return numba.njit(cache=True, nogil=True)(fn)
