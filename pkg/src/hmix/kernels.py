"""Backend selection for the hot kernels.

Prefers the compiled extension; falls back to the NumPy implementation
when the extension is unavailable (or when HMIX_PURE=1 forces it). Both
backends are bitwise-equivalent, so the choice never changes results.
"""

from __future__ import annotations

import os

if os.environ.get("HMIX_PURE") == "1":
    from hmix import _kernels_py as _impl

    COMPILED = False
else:
    try:
        from hmix import _kernels as _impl  # type: ignore[attr-defined]

        COMPILED = True
    except ImportError:
        from hmix import _kernels_py as _impl

        COMPILED = False

gather_mix = _impl.gather_mix
walk_endpoints = _impl.walk_endpoints


def backend_name() -> str:
    return "compiled" if COMPILED else "numpy"
