"""Kernel selection.

The compiled kernels are used when importable and the input fits comfortably
in int64; an ``OverflowError`` from them reruns the computation on Python
ints.  ``ICSSKIT_BACKEND=pure`` forces the fallback.
"""
import os

import numpy as np

from . import _pure

try:
    from . import _ckernels
except ImportError:  # pragma: no cover - depends on the build
    _ckernels = None

_LIMIT = 1 << 62
_forced = os.environ.get("ICSSKIT_BACKEND", "").strip().lower()
_active = "pure" if (_forced == "pure" or _ckernels is None) else "c"


def available():
    return ("c", "pure") if _ckernels is not None else ("pure",)


def active():
    return _active


def set_backend(name):
    """Switch kernels at runtime ("c" or "pure"); returns the previous name."""
    global _active
    if name not in available():
        raise ValueError(f"backend {name!r} not available; have {available()}")
    prev, _active = _active, name
    return prev


def _fits(rows):
    for row in rows:
        for v in row:
            if v >= _LIMIT or v <= -_LIMIT:
                return False
    return True


def _to_lists(arr):
    return [[int(v) for v in row] for row in arr]


def snf(rows, m, n, track):
    if _active == "c" and _fits(rows):
        try:
            diag, U, Ui, V = _ckernels.snf(np.array(rows, dtype=np.int64).reshape(m, n), track)
        except OverflowError:
            pass
        else:
            if track:
                return diag, _to_lists(U), _to_lists(Ui), _to_lists(V)
            return diag, None, None, None
    return _pure.snf([list(r) for r in rows], m, n, track)


def kernel(rows, m, n):
    if _active == "c" and _fits(rows):
        try:
            return _to_lists(_ckernels.kernel(np.array(rows, dtype=np.int64).reshape(m, n)))
        except OverflowError:
            pass
    return _pure.kernel([list(r) for r in rows], m, n)
