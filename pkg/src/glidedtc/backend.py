"""Kernel backend selection: compiled extension if available, numpy fallback."""

from . import _kernels_py

try:
    from . import _kernels  # noqa: F401

    _impl = _kernels
    BACKEND = "cython"
except ImportError:  # pragma: no cover - depends on build environment
    _impl = _kernels_py
    BACKEND = "python"

MU_CODES = {"x": 0, "y": 1, "z": 2}

chain_apply = _impl.chain_apply
chain_evolve = _impl.chain_evolve


def get_backend(name: str):
    """Explicit backend lookup (for tests and benchmarks)."""
    if name == "python":
        return _kernels_py
    if name == "cython":
        from . import _kernels

        return _kernels
    raise ValueError(f"unknown backend {name!r}")
