"""Realizations of (a, a, b) for even a and for a divisible by 3.

The workhorse is the paired construction: a pack (L1, L2) with a
transversal T of L1 plus an extension pair (A1, A2) from an OA(3,5,t)
yields a realization of (h1 t, ..., h_{k-1} t, h_k t + c).
"""

from __future__ import annotations

from math import ceil, gcd

import numpy as np

from cubeforge.assembly import WriteOnceGrid
from cubeforge.basic import cube_with_subcube, diagonal_realization, inflate_realization, move_corner_subcube, plain_cube
from cubeforge.catalog import load_catalog
from cubeforge.core import PairedPack, Realization, check_paired
from cubeforge.errors import ConstructionFailed, ExtensionInvalid, OutOfTheoremRange, PackInvalid, UnsupportedOrder
from cubeforge.oa import ExtensionPair, check_extension, extension_from_oa, oa_for_order


def paired_assembly(pack: PairedPack, ext: ExtensionPair) -> WriteOnceGrid:
    """Fill the order t(n-1)+c grid case by case; n is the order of L2.

    Index x in [n] names the block t(x-1)+[t] for x < n and t(n-1)+[c]
    for x = n.
    """
    rep = check_paired(pack)
    if not rep.valid:
        raise PackInvalid(str(rep))
    rep = check_extension(ext)
    if not rep.valid:
        raise ExtensionInvalid(str(rep))
    h = pack.first.partition
    L1 = pack.first.cube.astype(np.int64)
    L2 = pack.second.cube.astype(np.int64)
    n = L2.shape[0]
    t, c = ext.t, ext.c
    A1 = ext.first.astype(np.int64)
    A2 = ext.second.astype(np.int64)
    m = sum(h[:-1])
    tail = set(range(m + 1, n + 1))
    transversal = {tuple(cell) for cell in pack.transversal}
    grid = WriteOnceGrid(t * (n - 1) + c)

    def span(x):
        start = t * (x - 1)
        return slice(start, start + (t if x < n else c))

    # Case 4: the tail block is one cube on its own symbols
    size = t * h[-1] + c
    grid.put((slice(t * m, t * m + size),) * 3, plain_cube(size, t * m), "case 4")

    # Case 3: super-blocks around the transversal cells
    B = move_corner_subcube(cube_with_subcube(t + c, c), c).astype(np.int64)
    outer = np.zeros((t + c,) * 3, dtype=bool)
    outer[t:, t:, t:] = True
    for (i, j, l) in sorted(transversal):
        base = L1[i - 1, j - 1, l - 1]
        vals = np.where(B <= t, t * (base - 1) + B, t * (n - 2) + B)
        idx = tuple(np.r_[t * (x - 1): t * x, t * (n - 1): t * (n - 1) + c] for x in (i, j, l))
        grid.put(np.ix_(*idx), vals, "case 3", where=~outer)

    for i in range(1, n + 1):
        for j in range(1, n + 1):
            for l in range(1, n + 1):
                cell = (i, j, l)
                if set(cell) <= tail:
                    continue
                tops = [x == n for x in cell].count(True)
                if tops == 0:
                    if cell in transversal:
                        continue
                    v1 = L1[i - 1, j - 1, l - 1]
                    v2 = L2[i - 1, j - 1, l - 1]
                    # Case 1
                    top = t * (n - 2) + A2[:t, :t, :t]
                    low = t * (v1 - 1) + A1
                    high = t * (v2 - 1) + A1 if v2 != n else top
                    vals = np.where(A2[:t, :t, :t] <= t, low, high)
                    grid.put((span(i), span(j), span(l)), vals, "case 1")
                elif tops == 1:
                    v2 = L2[i - 1, j - 1, l - 1]
                    if v2 == n:
                        continue  # covered by a case 3 super-block
                    # Case 2: the extension boundary of A2 supplies the block
                    sl = tuple(slice(t, t + c) if x == n else slice(0, t) for x in cell)
                    grid.put((span(i), span(j), span(l)), t * (v2 - 1) + A2[sl], "case 2")
    return grid


def paired_construction(pack: PairedPack, ext: ExtensionPair) -> Realization:
    grid = paired_assembly(pack, ext)
    if grid.holes:
        raise ConstructionFailed(f"paired construction left {grid.holes} cells empty")
    h = pack.first.partition
    t, c = ext.t, ext.c
    partition = tuple(x * t for x in h[:-1]) + (h[-1] * t + c,)
    real = Realization(partition, grid.cube)
    rep = real.check()
    if not rep.valid:
        raise ConstructionFailed(str(rep))
    return real


# ---------------------------------------------------------------------------
# routing


CATALOG_HITS = {
    (2, 1): "lc-2-2-1",
    (4, 2): "lc-4-4-2",
    (4, 3): "lc-4-4-3",
    (3, 2): "lc-3-3-2",
    (6, 5): "lc-6-6-5",
    (9, 7): "lc-9-9-7",
    (9, 8): "lc-9-9-8",
    (12, 7): "lc-12-12-7",
}

PACKS = {
    "2-2-1": "pair-2-2-1/2-2-2",
    "4-4-2": "pair-4-4-2/4-4-3",
    "4-4-3": "pair-4-4-3/4-4-4",
    "3-3-2": "pair-3-3-2/3-3-3",
}


def in_even_range(a, b) -> bool:
    if not 1 <= b <= a:
        return False
    if a % 2 == 0:
        return b >= ceil(a / 2)
    if a % 6 == 3:
        return b >= ceil(2 * a / 3)
    return False


def in_odd_range(a, b) -> bool:
    return a % 6 in (1, 5) and ceil(a / 2) <= b <= a


def paired_route(a, b):
    """(pack name, t, c) for the paired construction, or None when another route applies."""
    if a == 12 and b == 11:
        return PACKS["3-3-2"], 4, 3
    if a % 8 in (0, 2, 6) and a >= 8:
        t = a // 2
        return PACKS["2-2-1"], t, b - t
    if a % 8 == 4 and a >= 20:
        t = a // 4
        if b <= 3 * t:
            return PACKS["4-4-2"], t, b - 2 * t
        return PACKS["4-4-3"], t, b - 3 * t
    if a % 6 == 3 and a >= 15:
        t = a // 3
        return PACKS["3-3-2"], t, b - 2 * t
    return None


def plan_even(a, b) -> tuple:
    """Describe how construct_even will build (a, a, b) without building it."""
    if not in_even_range(a, b):
        raise OutOfTheoremRange(f"({a},{a},{b}) is outside the even/3-divisible range")
    if (a, b) in CATALOG_HITS:
        return ("catalog", CATALOG_HITS[(a, b)])
    if a == b:
        return ("diagonal", a)
    for d in sorted(_divisors(gcd(a, b)), reverse=True):
        if d == 1:
            continue
        base = (a // d, b // d)
        if in_even_range(*base) or in_odd_range(*base):
            try:
                _plan_any(*base)
            except UnsupportedOrder:
                continue
            return ("inflate", base, d)
    route = paired_route(a, b)
    if route is None:
        raise UnsupportedOrder(a, a)
    pack, t, c = route
    oa_for_order(t)  # raises UnsupportedOrder for a bare factor 2 or 3
    return ("paired", pack, t, c)


def _plan_any(a, b):
    if in_even_range(a, b):
        return plan_even(a, b)
    return ("odd", a, b)


def _divisors(n):
    return [d for d in range(1, n + 1) if n % d == 0]


def construct_even(a, b) -> Realization:
    plan = plan_even(a, b)
    kind = plan[0]
    if kind == "catalog":
        real = load_catalog(plan[1])
    elif kind == "diagonal":
        real = diagonal_realization(a, 3)
    elif kind == "inflate":
        (a0, b0), d = plan[1], plan[2]
        if in_even_range(a0, b0):
            base = construct_even(a0, b0)
        else:
            from cubeforge.odd import construct_odd

            base = construct_odd(a0, b0)
        real = inflate_realization(base, d)
    else:
        _, pack_name, t, c = plan
        pack = load_catalog(pack_name)
        real = paired_construction(pack, extension_from_oa(oa_for_order(t), c))
    rep = real.check()
    if not rep.valid:
        raise ConstructionFailed(f"({a},{a},{b}) via {kind}: {rep}")
    return real
