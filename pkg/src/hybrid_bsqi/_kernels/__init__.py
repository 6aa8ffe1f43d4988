"""Backend selection for the hot loops.

The numba kernels are used when numba imports, unless the environment sets
``HYBRID_BSQI_NO_NUMBA=1``; the numpy kernels are then used instead. Both
modules expose the same functions with the same signatures.
"""

import os
from types import ModuleType

from . import numpy_impl

_FLAG = "HYBRID_BSQI_NO_NUMBA"

try:
    from . import numba_impl
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba_impl = None


def available() -> tuple[str, ...]:
    return ("numba", "numpy") if numba_impl is not None else ("numpy",)


def get(name: str | None = None) -> ModuleType:
    """Kernel module by name; ``None`` picks the default for this process."""
    if name is None:
        name = "numpy" if os.environ.get(_FLAG, "") not in ("", "0") else "numba"
        if numba_impl is None:
            name = "numpy"
    if name == "numba":
        if numba_impl is None:
            raise RuntimeError("numba backend requested but numba is not importable")
        return numba_impl
    if name == "numpy":
        return numpy_impl
    raise ValueError(f"unknown kernel backend {name!r}")
