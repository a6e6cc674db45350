"""Kernel backend selection.

The compiled Cython core is preferred when built; otherwise the NumPy
fallback is used. Set PTL_KERNELS=python or PTL_KERNELS=cython to force a
backend (forcing cython raises if the extension is missing).
"""

import os

_forced = os.environ.get("PTL_KERNELS", "").strip().lower()

if _forced in ("py", "python", "numpy"):
    from . import _pykernels as kernels
    BACKEND = "python"
elif _forced in ("c", "cython", "compiled"):
    from . import _ckernels as kernels  # type: ignore[no-redef]
    BACKEND = "cython"
else:
    try:
        from . import _ckernels as kernels  # type: ignore[no-redef]
        BACKEND = "cython"
    except ImportError:
        from . import _pykernels as kernels
        BACKEND = "python"


def backend() -> str:
    """Name of the active kernel backend ('cython' or 'python')."""
    return BACKEND
