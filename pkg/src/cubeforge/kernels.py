"""Select the compiled kernels when available, else the pure-Python ones.

Set ``CUBEFORGE_PURE=1`` to force the fallback.
"""

import os

from cubeforge import _kernels_py

_compiled = None
if os.environ.get("CUBEFORGE_PURE", "") not in ("1", "true", "yes"):
    try:
        from cubeforge import _kernels as _compiled
    except ImportError:  # extension not built
        _compiled = None

BACKEND = "compiled" if _compiled is not None else "python"

# bitmask width of the compiled loops
_COMPILED_MAX_ORDER = 63


def line_duplicates(cube, limit):
    if _compiled is not None and cube.shape[0] <= _COMPILED_MAX_ORDER:
        return _compiled.line_duplicates(cube, limit)
    return _kernels_py.line_duplicates(cube, limit)


def search(fixed, allowed, n, budget):
    if _compiled is not None and n <= _COMPILED_MAX_ORDER:
        return _compiled.search(fixed, allowed, n, budget)
    return _kernels_py.search(fixed, allowed, n, budget)
