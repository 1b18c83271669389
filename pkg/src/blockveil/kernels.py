"""Kernel backend selection.

Prefers the compiled extension; falls back to the numpy implementation when
the extension is missing or BLOCKVEIL_PURE=1. Both backends are bit-identical
by contract (and by test).
"""

import os

if os.environ.get("BLOCKVEIL_PURE") == "1":
    from . import _kernels_py as _impl
else:
    try:
        from . import _kernels as _impl  # type: ignore[attr-defined]
    except ImportError:
        from . import _kernels_py as _impl

BACKEND: str = _impl.BACKEND
apply_block_map = _impl.apply_block_map
apply_block_gather = _impl.apply_block_gather
apply_pixel_gather = _impl.apply_pixel_gather


def available_backends():
    """Names of importable backends, compiled one first when present."""
    names = []
    try:
        from . import _kernels  # noqa: F401

        names.append("cython")
    except ImportError:
        pass
    names.append("python")
    return names
