"""Existence verdicts, the top-level constructor and a small exhaustive search."""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd

import numpy as np

from cubeforge import kernels
from cubeforge.basic import diagonal_realization, inflate_realization, plain_cube
from cubeforge.core import DTYPE, Realization, block_ranges, validate_partition
from cubeforge.errors import (
    BudgetExceeded,
    ConstructionFailed,
    ProvablyNonexistent,
    Unsupported,
    UnsupportedOrder,
)

EXISTS = "Exists"
NOT_EXISTS = "NotExists"
UNKNOWN = "Unknown"

DEFAULT_BUDGET = 10 ** 8
# partitions up to this order fall back on exhaustive search
SEARCH_MAX_ORDER = 6
SEARCH_FALLBACK_BUDGET = 10 ** 7


@dataclass(frozen=True)
class ExistenceVerdict:
    status: str
    justification: str

    def __str__(self):
        return f"{self.status} ({self.justification})"


def _normal(p) -> tuple:
    return tuple(sorted(validate_partition(p), reverse=True))


def _two_sizes(parts):
    a, b = parts[0], parts[-1]
    return a, b, parts.count(a), len(parts)


def existence(p) -> ExistenceVerdict:
    parts = _normal(p)
    k = len(parts)
    if k == 1:
        return ExistenceVerdict(EXISTS, "single block")
    sizes = set(parts)
    if len(sizes) == 1:
        return ExistenceVerdict(EXISTS, "Thm a^k")
    if len(sizes) > 2:
        return ExistenceVerdict(UNKNOWN, "more than two part sizes")
    a, b, u, k = _two_sizes(parts)
    if k == 2:
        # a subcube of order a in a cube of order a + b needs a <= (a+b)/2
        return ExistenceVerdict(NOT_EXISTS, "subcube bound")
    if u == 1:
        if a <= (k - 1) * b:
            return ExistenceVerdict(EXISTS, "Thm ab^(k-1)")
        return ExistenceVerdict(NOT_EXISTS, "Thm ab^(k-1)")
    if u >= 3:
        return ExistenceVerdict(EXISTS, "Thm main result, u>=3")
    if a > 2 * (k - 2) * b:
        return ExistenceVerdict(NOT_EXISTS, "Lemma a^2b^(k-2) bound")
    m = (k - 2) * b
    if a % 6 == 3 and a < 2 * m and 3 * m < 2 * a:
        return ExistenceVerdict(UNKNOWN, "open: a = 3 mod 6")
    if k == 3:
        tag = "Thm odd-a" if a % 6 in (1, 5) else "Thm even-a"
    elif a <= m:
        tag = "Cor a<=(k-2)b"
    else:
        tag = "Lemma greater k"
    return ExistenceVerdict(EXISTS, tag)


# ---------------------------------------------------------------------------
# construction


def construct(p) -> Realization:
    """Build a verified realization or raise ProvablyNonexistent / Unsupported."""
    parts = _normal(p)
    verdict = existence(parts)
    if verdict.status == NOT_EXISTS:
        raise ProvablyNonexistent(verdict)
    real = _route(parts, verdict)
    rep = real.check()
    if not rep.valid:
        raise ConstructionFailed(f"{parts}: {rep}")
    return real


def _route(parts, verdict) -> Realization:
    n = sum(parts)
    if len(parts) == 1:
        return Realization(parts, plain_cube(n))
    if len(set(parts)) == 1:
        return diagonal_realization(parts[0], len(parts))
    if verdict.status == UNKNOWN:
        return _by_search(parts, "open-problem", verdict.justification)
    if len(parts) == 3 and parts[0] == parts[1]:
        a, b = parts[0], parts[2]
        try:
            if a % 6 in (1, 5):
                from cubeforge.odd import construct_odd

                return construct_odd(a, b)
            from cubeforge.even import construct_even

            return construct_even(a, b)
        except UnsupportedOrder as exc:
            return _by_inflation(parts) or _by_search(parts, "OA-gap", str(exc))
    found = _by_inflation(parts)
    if found is not None:
        return found
    return _by_search(parts, "citation-only", verdict.justification)


def _by_inflation(parts):
    g = 0
    for h in parts:
        g = gcd(g, h)
    for d in range(g, 1, -1):
        if g % d:
            continue
        smaller = tuple(h // d for h in parts)
        if existence(smaller).status != EXISTS:
            continue
        try:
            base = construct(smaller)
        except (Unsupported, ProvablyNonexistent):
            continue
        return inflate_realization(base, d)
    return None


def _by_search(parts, reason, detail):
    if sum(parts) > SEARCH_MAX_ORDER:
        raise Unsupported(reason, detail)
    try:
        found = brute_force_search(parts, SEARCH_FALLBACK_BUDGET)
    except BudgetExceeded:
        raise Unsupported(reason, f"{detail}; search budget exhausted") from None
    if found is None:
        raise ProvablyNonexistent(ExistenceVerdict(NOT_EXISTS, "exhaustive search"))
    return found


# ---------------------------------------------------------------------------
# search


def search_problem(parts) -> tuple[np.ndarray, np.ndarray]:
    """Fixed symbols and per-cell symbol bitmasks for a normal-form search.

    Blocks of order <= 3 are seeded with the cyclic cube: every latin cube
    of such an order is isotopic to it, and isotopies inside one block's
    index and symbol ranges keep the other blocks in place.  Larger blocks
    only get their three lines through the corner cell fixed (a reduced
    form, reachable by the same isotopies) and are otherwise searched with
    their own symbols.
    """
    parts = validate_partition(parts)
    n = sum(parts)
    fixed = np.zeros((n, n, n), dtype=np.int64)
    full = (1 << n) - 1
    allowed = np.full((n, n, n), full, dtype=np.int64)
    for block in block_ranges(parts):
        lo, h = block.start - 1, len(block)
        sl = slice(lo, lo + h)
        own = ((1 << h) - 1) << lo
        allowed[sl, sl, sl] = own
        if h <= 3:
            fixed[sl, sl, sl] = plain_cube(h, lo)
        else:
            idx = np.arange(h)
            fixed[lo, lo, sl] = lo + idx + 1
            fixed[lo, sl, lo] = lo + idx + 1
            fixed[sl, lo, lo] = lo + idx + 1
    return fixed, allowed


def brute_force_search(p, budget=DEFAULT_BUDGET):
    """Exhaustive normal-form search.

    Returns a Realization, or None when the search space is exhausted
    without a solution; raises BudgetExceeded when ``budget`` node
    expansions run out first.
    """
    parts = validate_partition(p)
    n = sum(parts)
    fixed, allowed = search_problem(parts)
    status, cells, nodes = kernels.search(fixed.ravel().tolist(), allowed.ravel().tolist(), n, int(budget))
    if status < 0:
        raise BudgetExceeded(nodes)
    if status == 0:
        return None
    cube = np.array(cells, dtype=DTYPE).reshape(n, n, n)
    real = Realization(parts, cube)
    rep = real.check()
    if not rep.valid:
        raise ConstructionFailed(f"search returned an invalid cube: {rep}")
    return real
