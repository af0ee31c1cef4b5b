"""Backend selection for the monomial kernels.

The compiled extension is used when it imports; set ``MIXEDVOL_KERNELS=python``
to force the numpy fallback.
"""

from __future__ import annotations

import os
from types import ModuleType

from mixedvol import _pykernels


def get_backend(name: str) -> ModuleType:
    if name == "python":
        return _pykernels
    if name == "cython":
        from mixedvol import _ckernels

        return _ckernels
    raise ValueError(f"unknown kernel backend {name!r}")


def _select() -> ModuleType:
    if os.environ.get("MIXEDVOL_KERNELS", "").lower() == "python":
        return _pykernels
    try:
        return get_backend("cython")
    except ImportError:
        return _pykernels


_backend = _select()
BACKEND: str = _backend.BACKEND
minimalize = _backend.minimalize
product = _backend.product
depth_histogram = _backend.depth_histogram


def available_backends() -> list[str]:
    names = ["python"]
    try:
        get_backend("cython")
        names.append("cython")
    except ImportError:
        pass
    return names
