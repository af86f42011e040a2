"""Backend dispatch for the generator-construction kernels.

The compiled extension (`_superop_cy`) is preferred when it was built; the
pure-numpy module is the fallback.  The choice happens once at import and can
be pinned with the environment variable ``LINDBLOCH_BACKEND=numpy|cython`` or
switched at runtime with :func:`set_backend` (used by the tests and the
benchmark to compare both implementations).
"""

import os

import numpy as np

from . import _superop_np

try:
    from . import _superop_cy
except ImportError:  # extension not built; numpy fallback only
    _superop_cy = None

_IMPLS = {"numpy": _superop_np}
if _superop_cy is not None:
    _IMPLS["cython"] = _superop_cy


def _resolve(name: str) -> str:
    if name == "auto":
        return "cython" if "cython" in _IMPLS else "numpy"
    if name not in _IMPLS:
        raise ValueError(
            f"backend {name!r} is not available (built: {sorted(_IMPLS)})"
        )
    return name


_active = _resolve(os.environ.get("LINDBLOCH_BACKEND", "auto"))


def backend() -> str:
    """Name of the kernel implementation in use ('cython' or 'numpy')."""
    return _active


def available_backends() -> tuple:
    return tuple(sorted(_IMPLS))


def set_backend(name: str) -> str:
    """Select 'numpy', 'cython', or 'auto'; returns the resolved name."""
    global _active
    _active = _resolve(name)
    return _active


def hamiltonian_superop(H: np.ndarray, elements: np.ndarray) -> np.ndarray:
    H = np.ascontiguousarray(H, dtype=np.complex128)
    elements = np.ascontiguousarray(elements, dtype=np.complex128)
    return _IMPLS[_active].hamiltonian_superop(H, elements)


def dissipator_superop(V: np.ndarray, elements: np.ndarray) -> np.ndarray:
    V = np.ascontiguousarray(V, dtype=np.complex128)
    elements = np.ascontiguousarray(elements, dtype=np.complex128)
    return _IMPLS[_active].dissipator_superop(V, elements)
