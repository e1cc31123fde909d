"""Kernel selection: compiled core when importable, pure Python otherwise.

Set ``FAVRES_PURE=1`` to force the fallback.
"""

import os

from . import _zpm

BACKEND = "python"
_core = _zpm

if os.environ.get("FAVRES_PURE", "") not in ("1", "true", "yes"):
    try:
        from . import _zpm_core as _compiled
    except ImportError:  # extension not built
        _compiled = None
    if _compiled is not None:
        _core = _compiled
        BACKEND = "compiled"

# int64 products must not overflow inside the compiled kernel
_COMPILED_LIMIT = 2**31


def homology_exponents(d_in, d_out, n_mid, p, m):
    if BACKEND == "compiled" and p**m < _COMPILED_LIMIT:
        return _core.homology_exponents(d_in, d_out, n_mid, p, m)
    return _zpm.homology_exponents(d_in, d_out, n_mid, p, m)


def pivot_valuations(A, p, m):
    if BACKEND == "compiled" and p**m < _COMPILED_LIMIT:
        return _core.pivot_valuations(A, p, m)
    return _zpm.pivot_valuations(A, p, m)
