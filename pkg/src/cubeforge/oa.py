"""Orthogonal arrays OA(3,5,n) and the extension-by-c pair derived from them."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations

import numpy as np

from cubeforge.core import DTYPE, VerificationReport, Violation, frozen, verify_cube, verify_partial
from cubeforge.errors import BadC, DimensionMismatch, OrderMismatch, OrderTooSmall, UnsupportedOrder
from cubeforge.gf import factorize, galois_field, prime_power


@dataclass(frozen=True)
class OrthogonalArray:
    """An OA(3,5,n) of index 1 stored as a 5 x n^3 array over [n]."""

    levels: int
    array: np.ndarray = field(repr=False)
    strength: int = 3

    def __post_init__(self):
        arr = np.array(self.array, dtype=np.int64, copy=True)
        arr.flags.writeable = False
        object.__setattr__(self, "array", arr)

    @property
    def constraints(self):
        return self.array.shape[0]

    @property
    def columns(self):
        return self.array.T


def check_oa(candidate, t, k, n, index=1) -> VerificationReport:
    """Count every t-tuple in every t-subset of rows; all counts must equal ``index``."""
    arr = np.asarray(candidate)
    if arr.ndim != 2 or arr.shape != (k, index * n ** t):
        raise DimensionMismatch(f"expected a {k} x {index * n ** t} table, got {arr.shape}")
    arr = arr.astype(np.int64)
    violations = []
    bad = np.argwhere((arr < 1) | (arr > n))
    for row, col in bad[:16]:
        violations.append(Violation("symbol out of range", (int(row) + 1, int(col) + 1), int(arr[row, col])))
    if len(bad):
        return VerificationReport.from_violations(violations, len(bad))
    total = 0
    for rows in combinations(range(k), t):
        code = np.zeros(arr.shape[1], dtype=np.int64)
        for r in rows:
            code = code * n + (arr[r] - 1)
        counts = np.bincount(code, minlength=n ** t)
        wrong = np.flatnonzero(counts != index)
        total += len(wrong)
        for w in wrong[: max(0, 16 - len(violations))]:
            digits = np.unravel_index(int(w), (n,) * t)
            tup = tuple(int(d) + 1 for d in digits)
            violations.append(Violation("coverage", tuple(r + 1 for r in rows),
                                        detail=f"tuple {tup} occurs {counts[w]} times"))
    return VerificationReport.from_violations(violations, total)


def _sorted_columns(arr):
    order = np.lexsort((arr[2], arr[1], arr[0]))
    return arr[:, order]


def oa_prime_power(q) -> OrthogonalArray:
    """Evaluate every polynomial of degree <= 2 over GF(q) at five places.

    For q >= 5 the places are five distinct field elements; for q = 4 they
    are the four field elements plus the leading coefficient.
    """
    prime_power(q)
    if q < 4:
        raise OrderTooSmall(f"OA(3,5,{q}) does not exist for q < 4")
    F = galois_field(q)
    c0, c1, c2 = (g.ravel() for g in np.meshgrid(np.arange(q), np.arange(q), np.arange(q), indexing="ij"))
    rows = []
    points = range(4) if q == 4 else range(5)
    for x in points:
        x2 = F.mul[x, x]
        val = F.add[F.add[c0, F.mul[c1, x]], F.mul[c2, x2]]
        rows.append(val)
    if q == 4:
        rows.append(c2)
    arr = np.array(rows, dtype=np.int64) + 1
    return OrthogonalArray(q, _sorted_columns(arr))


def trivial_oa() -> OrthogonalArray:
    return OrthogonalArray(1, np.ones((5, 1), dtype=np.int64))


def oa_product(first: OrthogonalArray, second: OrthogonalArray) -> OrthogonalArray:
    """Pair the levels componentwise: (x, y) -> (x-1)*m + y."""
    n, m = first.levels, second.levels
    a, b = first.array, second.array
    big = (a[:, :, None] - 1) * m + b[:, None, :]
    arr = big.reshape(a.shape[0], -1)
    return OrthogonalArray(n * m, _sorted_columns(arr))


@lru_cache(maxsize=32)
def oa_for_order(n) -> OrthogonalArray:
    """Product of prime-power arrays; every prime-power factor must be >= 4."""
    if n < 1:
        raise ValueError(f"order must be positive, got {n}")
    factors = factorize(n)
    for p, e in sorted(factors.items()):
        if p ** e < 4:
            raise UnsupportedOrder(n, p ** e)
    result = None
    for p, e in sorted(factors.items()):
        part = oa_prime_power(p ** e)
        result = part if result is None else oa_product(result, part)
    return trivial_oa() if result is None else result


def oa_supported(n) -> bool:
    return n >= 1 and all(p ** e >= 4 for p, e in factorize(n).items())


# ---------------------------------------------------------------------------
# extension by c


@dataclass(frozen=True)
class ExtensionPair:
    """A latin cube A1 of order t and a partial cube A2 of order t + c."""

    first: np.ndarray = field(repr=False)
    second: np.ndarray = field(repr=False)
    c: int

    def __post_init__(self):
        object.__setattr__(self, "first", frozen(self.first))
        object.__setattr__(self, "second", frozen(self.second))

    @property
    def t(self):
        return self.first.shape[0]


def extension_from_oa(oa: OrthogonalArray, c) -> ExtensionPair:
    """Derive (A1, A2) from the columns (o1..o5) of an OA(3,5,t).

    A1(o1,o2,o3) = o4.  In A2 the same cell holds o4 when o5 > c; otherwise
    it holds t + o5 and o4 moves to the three boundary cells obtained by
    replacing one coordinate with t + o5.
    """
    t = oa.levels
    if not 0 <= c <= t:
        raise BadC(f"need 0 <= c <= {t}, got {c}")
    o1, o2, o3, o4, o5 = (oa.array[r] - 1 for r in range(5))
    a1 = np.zeros((t, t, t), dtype=DTYPE)
    a1[o1, o2, o3] = o4 + 1
    a2 = np.zeros((t + c, t + c, t + c), dtype=DTYPE)
    low = o5 >= c  # 0-based o5 >= c means o5 > c
    a2[o1[low], o2[low], o3[low]] = o4[low] + 1
    hi = ~low
    e = t + o5[hi]
    a2[o1[hi], o2[hi], o3[hi]] = e + 1
    a2[e, o2[hi], o3[hi]] = o4[hi] + 1
    a2[o1[hi], e, o3[hi]] = o4[hi] + 1
    a2[o1[hi], o2[hi], e] = o4[hi] + 1
    return ExtensionPair(a1, a2, c)


def check_extension(pair: ExtensionPair) -> VerificationReport:
    """The four extension bullets plus the latin/partial-latin properties.

    Violation kinds ``bullet 1``..``bullet 4`` follow the definition order.
    """
    a1, a2, c = pair.first, pair.second, pair.c
    t = a1.shape[0]
    if a2.shape != (t + c,) * 3:
        raise OrderMismatch(f"second array has shape {a2.shape}, expected order {t + c}")
    violations = []
    rep = verify_cube(a1)
    violations += [Violation(f"first cube: {v.kind}", v.where, v.symbol) for v in rep.violations]
    rep = verify_partial(a2)
    violations += [Violation(f"second cube: {v.kind}", v.where, v.symbol) for v in rep.violations]
    outer = np.zeros(t + c, dtype=np.int64)
    outer[t:] = 1
    n_out = outer[:, None, None] + outer[None, :, None] + outer[None, None, :]

    def cells(mask, kind, detail):
        for cell in np.argwhere(mask)[:16]:
            violations.append(Violation(kind, tuple(int(x) + 1 for x in cell), int(a2[tuple(cell)]), detail))

    centre = a2[:t, :t, :t]
    cells(centre == 0, "bullet 1", "centre cell empty")
    one = n_out == 1
    cells(one & ((a2 == 0) | (a2 > t)), "bullet 2", "boundary cell must hold a symbol of [t]")
    cells((centre >= 1) & (centre <= t) & (centre != a1), "bullet 3", "disagrees with the first cube")
    cells((n_out >= 2) & (a2 != 0), "bullet 4", "cell must be empty")
    return VerificationReport.from_violations(violations)
