"""Shipped realizations, paired packs and the layer-expansion rules for
the seeded entries of orders 25, 26 and 31.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from importlib import resources

import numpy as np

from cubeforge.core import (
    DTYPE,
    PairedPack,
    Realization,
    as_cube,
    check_paired,
    residue,
)
from cubeforge.errors import CatalogCorrupt, ShapeMismatch, UnknownEntry
from cubeforge.formats import CubeFile, loads_lcube


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    kind: str  # "realization", "paired-pack" or "seeded"
    partition: tuple
    files: tuple
    rule: str | None = None

    @property
    def order(self):
        return sum(self.partition)


_ENTRIES = [
    CatalogEntry("pair-2-2-1/2-2-2", "paired-pack", (2, 2, 1), ("lc-2-2-1", "lc-2-2-2")),
    CatalogEntry("pair-4-4-2/4-4-3", "paired-pack", (4, 4, 2), ("lc-4-4-2", "lc-4-4-3")),
    CatalogEntry("pair-4-4-3/4-4-4", "paired-pack", (4, 4, 3), ("lc-4-4-3", "lc-4-4-4")),
    CatalogEntry("pair-3-3-2/3-3-3", "paired-pack", (3, 3, 2), ("lc-3-3-2", "lc-3-3-3")),
    CatalogEntry("lc-6-6-5", "realization", (6, 6, 5), ("lc-6-6-5",)),
    CatalogEntry("lc-12-12-7", "seeded", (12, 12, 7), ("seed-12-12-7",), "app-B-12"),
    CatalogEntry("lc-9-9-7", "seeded", (9, 9, 7), ("seed-9-9-7",), "app-B-9"),
    CatalogEntry("lc-9-9-8", "seeded", (9, 9, 8), ("seed-9-9-8",), "app-B-9"),
]
# pack members are also addressable on their own
for _name, _parts in [("lc-2-2-1", (2, 2, 1)), ("lc-2-2-2", (2, 2, 2)), ("lc-4-4-2", (4, 4, 2)),
                      ("lc-4-4-3", (4, 4, 3)), ("lc-4-4-4", (4, 4, 4)), ("lc-3-3-2", (3, 3, 2)),
                      ("lc-3-3-3", (3, 3, 3))]:
    _ENTRIES.append(CatalogEntry(_name, "realization", _parts, (_name,)))

ENTRIES = {e.name: e for e in _ENTRIES}


def list_catalog() -> list[CatalogEntry]:
    return list(_ENTRIES)


@lru_cache(maxsize=None)
def read_data_file(stem) -> CubeFile:
    path = resources.files("cubeforge") / "data" / f"{stem}.lcube"
    return loads_lcube(path.read_text())


# ---------------------------------------------------------------------------
# seeded expansions


def _map(size, fn):
    """Lookup table x -> fn(x) for x in 0..size (0 stays 0)."""
    return np.array([0] + [fn(x) for x in range(1, size + 1)], dtype=DTYPE)


def nine_f(x, m):
    """Shift inside [9] and inside 9+[9] by -m; fix everything else."""
    if 1 <= x <= 9:
        return residue(x - m, 9)
    if 10 <= x <= 18:
        return 9 + residue(x - m, 9)
    return x


def nine_g(x):
    return residue(x + 9, 18) if 1 <= x <= 18 else x


def nine_h(x, m, b):
    return 18 + residue(x - 18 - m, b) if 19 <= x <= 18 + b else x


def twelve_f(x):
    if 1 <= x <= 6 or 13 <= x <= 18:
        return x + 6
    if 7 <= x <= 12 or 19 <= x <= 24:
        return x - 6
    return x


def twelve_g(x):
    if 1 <= x <= 12:
        return x + 12
    if 13 <= x <= 24:
        return x - 12
    return x


def twelve_h(x):
    for lo, shift in ((1, 18), (7, 6), (13, -6), (19, -18)):
        if lo <= x <= lo + 5:
            return x + shift
    return x


SEED_LAYERS = {
    "app-B-9": lambda n: (1, 19),
    "app-B-12": lambda n: (1, 2, 3, 4, 5, 6) + tuple(range(25, 32)),
}


def expand_appendix_b(seed, rule) -> np.ndarray:
    """Rebuild a full cube from its seed layers.

    ``seed`` is a partial cube holding only the seed layers.  Rule
    ``app-B-9`` (orders 25, 26) uses layers 1 and 19; rule ``app-B-12``
    (order 31) uses layers 1-6 and 25-31.
    """
    arr = as_cube(seed)
    n = arr.shape[0]
    if rule not in SEED_LAYERS:
        raise ShapeMismatch(f"unknown expansion rule {rule!r}")
    if rule == "app-B-9" and n not in (25, 26):
        raise ShapeMismatch(f"rule app-B-9 needs order 25 or 26, got {n}")
    if rule == "app-B-12" and n != 31:
        raise ShapeMismatch(f"rule app-B-12 needs order 31, got {n}")
    want = SEED_LAYERS[rule](n)
    filled = tuple(k + 1 for k in range(n) if (arr[:, :, k] != 0).any())
    if filled != want:
        raise ShapeMismatch(f"seed layers {filled} differ from expected {want}")
    for k in want:
        if (arr[:, :, k - 1] == 0).any():
            raise ShapeMismatch(f"seed layer {k} is incomplete")
    out = arr.copy()
    if rule == "app-B-9":
        b = n - 18
        L = arr[:, :, 0]
        M = arr[:, :, 18]
        for k in range(1, 10):
            fwd = _map(n, lambda x: nine_f(x, k - 1))
            back = _map(n, lambda x: nine_f(x, 1 - k))
            out[:, :, k - 1] = back[L[np.ix_(fwd[1:] - 1, fwd[1:] - 1)]]
        g = _map(n, nine_g)
        for k in range(10, 19):
            out[:, :, k - 1] = g[out[np.ix_(g[1:] - 1, g[1:] - 1)][:, :, k - 10]]
        for k in range(1, b + 1):
            hin = _map(n, lambda x: nine_h(x, k - 1, b))
            fb = _map(n, lambda x: nine_f(x, 1 - k))
            # the outer shift runs against the printed sign; with 1-k the
            # corner files repeat a symbol in every layer
            hb = _map(n, lambda x: nine_h(x, k - 1, b))
            out[:, :, 18 + k - 1] = hb[fb[M[hin[1:] - 1, :]]]
            # corner subcube: shift symbols only, so the corner stays latin
            # for even b as well
            up = _map(n, lambda x: nine_h(x, 1 - k, b))
            out[18:, 18:, 18 + k - 1] = up[M[18:, 18:]]
    else:
        f = _map(n, twelve_f)
        for k in range(7, 13):
            out[:, :, k - 1] = f[out[np.ix_(f[1:] - 1, f[1:] - 1)][:, :, k - 7]]
        g = _map(n, twelve_g)
        h = _map(n, twelve_h)
        for k in range(13, 25):
            out[:, :, k - 1] = h[out[np.ix_(h[1:] - 1, g[1:] - 1)][:, :, k - 13]]
    return out


# ---------------------------------------------------------------------------
# loading


def _realization(stem, partition) -> Realization:
    data = read_data_file(stem)
    if data.partition != partition:
        raise CatalogCorrupt(f"{stem}: stored partition {data.partition} != {partition}")
    real = Realization(partition, data.cube)
    rep = real.check()
    if not rep.valid:
        raise CatalogCorrupt(f"{stem}: {rep}")
    return real


@lru_cache(maxsize=None)
def load_catalog(name):
    """Return the verified Realization or PairedPack stored under ``name``."""
    entry = ENTRIES.get(name)
    if entry is None:
        raise UnknownEntry(f"no catalog entry {name!r}; known: {', '.join(ENTRIES)}")
    if entry.kind == "realization":
        return _realization(entry.files[0], entry.partition)
    if entry.kind == "seeded":
        data = read_data_file(entry.files[0])
        cube = expand_appendix_b(data.cube, entry.rule)
        real = Realization(entry.partition, cube)
        rep = real.check()
        if not rep.valid:
            raise CatalogCorrupt(f"{name}: {rep}")
        return real
    first_stem, second_stem = entry.files
    first = _realization(first_stem, entry.partition)
    second = _realization(second_stem, entry.partition[:-1] + (entry.partition[-1] + 1,))
    pack = PairedPack(first, second, read_data_file(first_stem).transversal)
    rep = check_paired(pack)
    if not rep.valid:
        raise CatalogCorrupt(f"{name}: {rep}")
    return pack
