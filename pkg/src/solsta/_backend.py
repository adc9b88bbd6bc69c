"""Kernel backend selection.

The compiled extension is preferred; the pure NumPy/SciPy implementation is
the drop-in fallback when the extension was not built for this interpreter.
"""

try:
    from . import _core as kernels
    BACKEND = "compiled"
except ImportError:  # pragma: no cover - depends on build environment
    from . import _pycore as kernels
    BACKEND = "python"


def backend_name() -> str:
    return BACKEND


__all__ = ["kernels", "backend_name", "BACKEND"]
