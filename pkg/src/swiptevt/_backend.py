"""Kernel backend selection.

The compiled extension is used when it imports; setting the environment
variable ``SWIPTEVT_PURE_PYTHON=1`` forces the pure-Python kernels.
"""

import os

from . import _pykernels

BACKEND = "python"
kernels = _pykernels

if os.environ.get("SWIPTEVT_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _ckernels as kernels  # noqa: F811
        BACKEND = "cython"
    except ImportError:  # pragma: no cover - depends on the build
        pass

OK = _pykernels.OK
NEEDS_QUAD = _pykernels.NEEDS_QUAD
NO_CONVERGENCE = _pykernels.NO_CONVERGENCE


def get_kernels(name=None):
    """Return the kernel module named ``"cython"`` or ``"python"`` (default: active)."""
    if name is None:
        return kernels
    if name == "python":
        return _pykernels
    if name == "cython":
        from . import _ckernels
        return _ckernels
    raise ValueError(f"unknown backend {name!r}")
