"""Kernel backend selection: compiled Cython core with a NumPy fallback.

The compiled backend is used when its extension module imported cleanly;
set RADIOULNAR_BACKEND=python (or =compiled) to force a choice, or call
`use_backend()` at runtime. Both backends implement the same functions with
identical semantics; `benchmarks/benchmark_backends.py` compares their speed.
"""

from __future__ import annotations

import os

from . import _kernels_py
from .tables import NumericModel, build_tables

_BACKENDS = {"python": _kernels_py}
try:
    from . import _kernels as _kernels_compiled

    _BACKENDS["compiled"] = _kernels_compiled
except ImportError:
    _kernels_compiled = None


def _initial_backend():
    name = os.environ.get("RADIOULNAR_BACKEND")
    if name:
        if name not in _BACKENDS:
            raise ImportError(
                f"RADIOULNAR_BACKEND={name!r} is not available; "
                f"choose from {sorted(_BACKENDS)}"
            )
        return name
    return "compiled" if "compiled" in _BACKENDS else "python"


_active_name = _initial_backend()


def kernels():
    """The active kernel module."""
    return _BACKENDS[_active_name]


def backend_name() -> str:
    return _active_name


def available_backends() -> tuple:
    return tuple(sorted(_BACKENDS))


def use_backend(name: str) -> None:
    """Switch the active backend (mainly for tests and benchmarks)."""
    global _active_name
    if name not in _BACKENDS:
        raise ValueError(f"unknown backend {name!r}; available: {sorted(_BACKENDS)}")
    _active_name = name


__all__ = [
    "NumericModel",
    "build_tables",
    "kernels",
    "backend_name",
    "available_backends",
    "use_backend",
]
