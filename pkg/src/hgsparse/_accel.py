"""Numba toggle for the hot kernels.

Kernels in :mod:`hgsparse._kernels` are compiled with numba unless the
``HGSPARSE_NO_NUMBA`` environment variable is set to a non-empty value
other than ``0``, in which case the same functions run as plain Python
over numpy arrays.  Both paths produce bit-identical results; the flag
only trades speed for an import without a JIT warm-up.

``HGSPARSE_THREADS`` caps the numba thread pool.  It is applied once at
import time and ignored in pure-Python mode.
"""

from __future__ import annotations

import os
import warnings

DISABLE_FLAG = "HGSPARSE_NO_NUMBA"
THREADS_FLAG = "HGSPARSE_THREADS"


def _flag_disabled() -> bool:
    value = os.environ.get(DISABLE_FLAG, "").strip()
    return value not in ("", "0")


NUMBA_ENABLED = False
if not _flag_disabled():
    try:
        import numba

        NUMBA_ENABLED = True
    except ImportError:  # pragma: no cover - numba is a hard dependency
        warnings.warn(
            "numba is not importable; falling back to pure-Python kernels",
            RuntimeWarning,
            stacklevel=2,
        )


def _apply_thread_cap() -> None:
    raw = os.environ.get(THREADS_FLAG, "").strip()
    if not raw:
        return
    try:
        cap = int(raw)
    except ValueError:
        warnings.warn(
            f"ignoring non-integer {THREADS_FLAG}={raw!r}", RuntimeWarning, stacklevel=2
        )
        return
    if cap < 1:
        warnings.warn(
            f"ignoring {THREADS_FLAG}={cap} (must be >= 1)", RuntimeWarning, stacklevel=2
        )
        return
    numba.set_num_threads(min(cap, numba.config.NUMBA_NUM_THREADS))


if NUMBA_ENABLED:
    _apply_thread_cap()
    jitkernel = numba.njit(cache=True)
else:

    def jitkernel(func):
        return func
