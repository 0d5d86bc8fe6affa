"""Kernel backend selection.

The compiled extension is preferred; the pure-numpy fallback is used when
it is missing or when ``SPHEREGUIDE_FORCE_PYTHON=1`` is set (useful for
the kernel benchmark and for debugging). Both backends are bit-compatible.
"""

import os

from . import _pykernels

if os.environ.get("SPHEREGUIDE_FORCE_PYTHON", "0") == "1":
    kernels = _pykernels
else:
    try:
        from . import _kernels as kernels  # type: ignore[no-redef]
    except ImportError:
        kernels = _pykernels

#: True when the Cython extension is active.
COMPILED = bool(getattr(kernels, "IS_COMPILED", False))


def backend_name() -> str:
    return "compiled" if COMPILED else "python"
