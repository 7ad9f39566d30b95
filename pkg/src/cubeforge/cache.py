"""On-disk memo for orthogonal arrays and realizations.

Enabled by pointing ``CUBEFORGE_CACHE`` at a directory.  Entries are named
by the sha256 of their parameters, written through a temporary file and
``os.replace``, and verified again every time they are read back; a stale
or damaged entry is discarded and rebuilt.
"""

from __future__ import annotations

import hashlib
import os
import tempfile
from pathlib import Path

from cubeforge.core import Realization
from cubeforge.errors import CubeError
from cubeforge.formats import dumps_lcube, dumps_oa, loads_lcube, loads_oa
from cubeforge.oa import OrthogonalArray, check_oa

ENV_VAR = "CUBEFORGE_CACHE"


def cache_dir() -> Path | None:
    root = os.environ.get(ENV_VAR)
    return Path(root) if root else None


def cache_key(kind, params) -> str:
    text = f"{kind}:" + ",".join(str(int(x)) for x in params)
    return hashlib.sha256(text.encode()).hexdigest()


def _path(kind, params) -> Path | None:
    root = cache_dir()
    if root is None:
        return None
    return root / f"{kind}-{cache_key(kind, params)}.txt"


def _write_atomic(path: Path, text: str):
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=".tmp-", suffix=path.suffix)
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        Path(tmp).unlink(missing_ok=True)
        raise


def _read(path):
    if path is None or not path.exists():
        return None
    try:
        return path.read_text()
    except OSError:
        return None


def cached_realization(parts, build) -> Realization:
    """Return the realization of ``parts``, calling ``build()`` on a miss."""
    parts = tuple(parts)
    path = _path("lc", parts)
    text = _read(path)
    if text is not None:
        try:
            data = loads_lcube(text)
            real = Realization(parts, data.cube)
            if data.partition == parts and real.check().valid:
                return real
        except CubeError:
            pass
        path.unlink(missing_ok=True)
    real = build()
    if path is not None:
        _write_atomic(path, dumps_lcube(real.cube, real.partition))
    return real


def cached_oa(n, build) -> OrthogonalArray:
    """Same contract as :func:`cached_realization` for an OA(3,5,n)."""
    path = _path("oa", (n,))
    text = _read(path)
    if text is not None:
        try:
            arr, t, levels, lam = loads_oa(text)
            if (t, levels, lam) == (3, n, 1) and check_oa(arr, 3, 5, n).valid:
                return OrthogonalArray(n, arr)
        except CubeError:
            pass
        path.unlink(missing_ok=True)
    oa = build()
    if path is not None:
        _write_atomic(path, dumps_oa(oa.array, n))
    return oa
