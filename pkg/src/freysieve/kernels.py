"""Kernel backend selection: compiled extension if built, numpy otherwise."""

from __future__ import annotations

from . import _kernels_py

try:
    from . import _kernels as _impl
except ImportError:  # pragma: no cover - build-env dependent
    _impl = _kernels_py

BACKEND = _impl.BACKEND

legendre_table = _impl.legendre_table
traces_deg1 = _impl.traces_deg1
traces_deg2 = _impl.traces_deg2
survivor_mask = _impl.survivor_mask


def get_backend(name):
    """Explicit backend lookup ("compiled" or "python"), for benchmarks/tests."""
    if name == "python":
        return _kernels_py
    if name == "compiled":
        if _impl.BACKEND != "compiled":
            raise RuntimeError("compiled kernels are not available")
        return _impl
    raise ValueError(f"unknown backend {name!r}")
