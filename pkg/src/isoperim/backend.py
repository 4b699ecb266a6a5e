"""Kernel backend selection.

Hot kernels exist in two variants: numba-jitted loops and a pure-numpy
fallback with identical semantics. ``ISO_BACKEND`` picks one explicitly
("numba" or "numpy"); the default ("auto") uses numba when importable.
``ISO_THREADS`` caps the numba thread pool (0 or unset = library default).
"""

from __future__ import annotations

import os
import warnings
from contextlib import contextmanager

_ACTIVE = None
_VALID = ("auto", "numba", "numpy")


def _load(name: str):
    if name == "numpy":
        from . import _kernels_numpy as mod

        return mod
    if name == "numba":
        from . import _kernels_numba as mod

        return mod
    try:
        from . import _kernels_numba as mod

        return mod
    except ImportError:
        warnings.warn(
            "numba is not available; falling back to the slower numpy kernels",
            RuntimeWarning,
            stacklevel=2,
        )
        from . import _kernels_numpy as mod

        return mod


def _apply_thread_cap(mod) -> None:
    if getattr(mod, "NAME", "") != "numba":
        return
    raw = os.environ.get("ISO_THREADS", "0").strip() or "0"
    try:
        cap = int(raw)
    except ValueError:
        raise ValueError(f"ISO_THREADS must be an integer, got {raw!r}")
    if cap > 0:
        import numba

        numba.set_num_threads(min(cap, numba.config.NUMBA_NUM_THREADS))


def kernels():
    """Return the active kernel module, resolving it on first use."""
    global _ACTIVE
    if _ACTIVE is None:
        choice = os.environ.get("ISO_BACKEND", "auto").strip().lower() or "auto"
        if choice not in _VALID:
            raise ValueError(f"ISO_BACKEND must be one of {_VALID}, got {choice!r}")
        _ACTIVE = _load(choice)
        _apply_thread_cap(_ACTIVE)
    return _ACTIVE


def backend_name() -> str:
    return kernels().NAME


@contextmanager
def use(name: str):
    """Temporarily force a backend ("numba" or "numpy"); for tests and
    benchmarks."""
    global _ACTIVE
    prev = _ACTIVE
    mod = _load(name)
    _apply_thread_cap(mod)
    _ACTIVE = mod
    try:
        yield mod
    finally:
        _ACTIVE = prev
