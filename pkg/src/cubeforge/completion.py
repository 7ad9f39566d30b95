"""Completion engines: bipartite matching, latin rectangle extension,
corner-channel completion of latin boxes and back-region filling via
edge colouring of regular bipartite graphs.
"""

from __future__ import annotations

from collections import Counter, deque
from typing import Hashable, Iterable, Mapping

import numpy as np

from cubeforge.core import DTYPE
from cubeforge.errors import (
    DimensionMismatch,
    ForcedUnsaturable,
    HypothesisViolated,
    NotRegular,
    RyserViolated,
)


def max_bipartite_matching(adjacency: Mapping[Hashable, Iterable[Hashable]], forced=()) -> dict:
    """Maximum matching from left to right vertices saturating ``forced``.

    ``adjacency`` maps each left vertex to its right neighbours; iteration
    order of both decides ties, so the result is deterministic.  Every
    right vertex in ``forced`` is covered if some maximum matching covers
    all of them, otherwise ForcedUnsaturable is raised.
    """
    adj = {u: list(dict.fromkeys(vs)) for u, vs in adjacency.items()}
    match_l: dict = {}
    match_r: dict = {}

    def augment(root):
        # iterative DFS for an augmenting path from a free left vertex
        stack = [(root, iter(adj[root]))]
        seen = set()
        parent = {}
        while stack:
            u, it = stack[-1]
            advanced = False
            for v in it:
                if v in seen:
                    continue
                seen.add(v)
                parent[v] = u
                w = match_r.get(v)
                if w is None:
                    # flip the path ending at v
                    while True:
                        pu = parent[v]
                        prev = match_l.get(pu)
                        match_l[pu] = v
                        match_r[v] = pu
                        if pu == root:
                            return True
                        v = prev
                stack.append((w, iter(adj[w])))
                advanced = True
                break
            if not advanced:
                stack.pop()
        return False

    for u in adj:
        augment(u)

    forced = list(dict.fromkeys(forced))
    if forced:
        radj: dict = {}
        for u, vs in adj.items():
            for v in vs:
                radj.setdefault(v, []).append(u)
        forced_set = set(forced)
        for v0 in forced:
            if v0 in match_r:
                continue
            # alternating BFS: v -> left u (non-matching) -> match_l[u]
            parent = {v0: None}
            queue = deque([v0])
            end = None
            while queue and end is None:
                v = queue.popleft()
                for u in radj.get(v, ()):
                    w = match_l.get(u)
                    if w is None:
                        end = (u, v)
                        break
                    if w in parent:
                        continue
                    parent[w] = (u, v)
                    if w not in forced_set:
                        end = (None, w)
                        break
                    queue.append(w)
            if end is None:
                raise ForcedUnsaturable(f"no maximum matching covers right vertex {v0!r}")
            u, v = end
            if u is not None:
                # augmenting path (only if the initial matching was not maximum)
                match_l[u] = v
                match_r[v] = u
                w = v
            else:
                w = v
                del match_r[w]
            # shift every left vertex on the path one step towards v0
            while parent[w] is not None:
                u, v = parent[w]
                match_l[u] = v
                match_r[v] = u
                w = v
    return dict(match_l)


# ---------------------------------------------------------------------------
# latin rectangles


def _check_rectangle(rect, n):
    arr = np.asarray(rect)
    if arr.ndim != 2:
        raise DimensionMismatch(f"rectangle must be two-dimensional, got {arr.shape}")
    r, s = arr.shape
    if s > n or r > n:
        raise DimensionMismatch(f"{r}x{s} rectangle does not fit order {n}")
    if ((arr < 1) | (arr > n)).any():
        raise DimensionMismatch(f"rectangle symbols must lie in [{n}]")
    for axis in (0, 1):
        srt = np.sort(arr, axis=axis)
        if (np.diff(srt, axis=axis) == 0).any():
            raise DimensionMismatch("not a latin rectangle (repeated symbol in a line)")
    return arr.astype(DTYPE)


def ryser_deficient(rect, n) -> list[tuple[int, int, int]]:
    """Symbols breaking N(i) >= r + s - n as ``(symbol, count, required)``."""
    arr = np.asarray(rect)
    r, s = arr.shape
    need = r + s - n
    counts = Counter(int(v) for v in arr.ravel())
    return [(i, counts.get(i, 0), need) for i in range(1, n + 1) if counts.get(i, 0) < need]


def extend_rectangle(rect, n, *, to_square=False) -> np.ndarray:
    """Extend an r x s latin rectangle on [n] to r x n (or n x n).

    Columns are appended one at a time; symbols whose count is at the Ryser
    bound for the current width must appear in the new column and are
    forced in the matching between rows and their missing symbols.
    """
    arr = _check_rectangle(rect, n)
    bad = ryser_deficient(arr, n)
    if bad:
        raise RyserViolated(*bad[0])
    r, s = arr.shape
    out = np.zeros((r, n), dtype=DTYPE)
    out[:, :s] = arr
    counts = Counter(int(v) for v in arr.ravel())
    for col in range(s, n):
        need = r + col + 1 - n
        missing = {}
        for i in range(r):
            present = set(out[i, :col].tolist())
            missing[i] = [x for x in range(1, n + 1) if x not in present]
        forced = [x for x in range(1, n + 1) if counts.get(x, 0) < need]
        match = max_bipartite_matching(missing, forced)
        if len(match) != r:
            raise HypothesisViolated("rectangle extension stalled", f"column {col + 1}")
        for i, x in match.items():
            out[i, col] = x
            counts[x] += 1
    if to_square:
        out = _add_rows(out, n)
    return out


def _add_rows(rect, n) -> np.ndarray:
    """Complete an r x n latin rectangle to a square with perfect matchings."""
    r = rect.shape[0]
    out = np.zeros((n, n), dtype=DTYPE)
    out[:r] = rect
    for row in range(r, n):
        missing = {}
        for j in range(n):
            present = set(out[:row, j].tolist())
            missing[j] = [x for x in range(1, n + 1) if x not in present]
        match = max_bipartite_matching(missing)
        if len(match) != n:
            raise HypothesisViolated("no perfect matching for a new row", f"row {row + 1}")
        for j, x in match.items():
            out[row, j] = x
    return out


# ---------------------------------------------------------------------------
# latin boxes


def complete_right_corner_channel(box, s) -> np.ndarray:
    """Fill the empty band (n-s+[s])^2 x [r] of an n x n x r partial latin box.

    The first band row of every layer k (i = n-s+1) is completed as one
    latin rectangle with rows indexed by k; each further band row repeats
    the previous one shifted one cell to the right, wrapping around.
    """
    arr = np.array(box, dtype=DTYPE, copy=True)
    if arr.ndim != 3 or arr.shape[0] != arr.shape[1]:
        raise DimensionMismatch(f"box must be n x n x r, got {arr.shape}")
    n, _, r = arr.shape
    if not 0 <= s <= n:
        raise HypothesisViolated("band width out of range", f"s={s}")
    if s == 0:
        if (arr == 0).any():
            raise HypothesisViolated("only band cells may be empty", tuple(int(x) + 1 for x in np.argwhere(arr == 0)[0]))
        return arr
    lo = n - s
    band = np.zeros(arr.shape, dtype=bool)
    band[lo:, lo:, :] = True
    empty = arr == 0
    if (empty & ~band).any():
        raise HypothesisViolated("only band cells may be empty", tuple(int(x) + 1 for x in np.argwhere(empty & ~band)[0]))
    if (arr[lo:, lo:, :] != 0).any():
        raise HypothesisViolated("band cells must be empty", tuple(int(x) + 1 + (lo if idx < 2 else 0) for idx, x in enumerate(np.argwhere(arr[lo:, lo:, :] != 0)[0])))
    for k in range(r):
        vk = set(arr[lo, :lo, k].tolist())
        for i in range(lo, n):
            if set(arr[i, :lo, k].tolist()) != vk:
                raise HypothesisViolated("row symbol sets differ in the band", (i + 1, k + 1))
            if set(arr[:lo, i, k].tolist()) != vk:
                raise HypothesisViolated("column symbol sets differ in the band", (i + 1, k + 1))
    layer = arr[lo, :lo, :].T  # rows indexed by k, columns by j
    counts = Counter(int(v) for v in layer.ravel())
    for x in range(1, n + 1):
        if counts.get(x, 0) < r - s:
            raise HypothesisViolated(f"symbol {x} occurs fewer than r-s times in the first band layer", (lo + 1,))
    ext = extend_rectangle(layer, n)
    arr[lo, lo:, :] = ext[:, lo:].T
    for i in range(lo + 1, n):
        arr[i, lo:, :] = np.roll(arr[i - 1, lo:, :], 1, axis=0)
    return arr


def equitable_coloring_regular(edges, d, n_left=None, n_right=None) -> list[int]:
    """Colour the edges of a d-regular bipartite multigraph with colours 1..d.

    ``edges`` is a sequence of ``(u, v)`` pairs (left, right).  Each colour
    class is a perfect matching, extracted one after another.
    """
    edges = [(u, v) for u, v in edges]
    left = Counter(u for u, _ in edges)
    right = Counter(v for _, v in edges)
    if n_left is not None and len(left) != n_left:
        raise NotRegular(f"expected {n_left} left vertices with edges, found {len(left)}")
    if n_right is not None and len(right) != n_right:
        raise NotRegular(f"expected {n_right} right vertices with edges, found {len(right)}")
    for side, cnt in (("left", left), ("right", right)):
        for vertex, deg in cnt.items():
            if deg != d:
                raise NotRegular(f"{side} vertex {vertex!r} has degree {deg}, expected {d}")
    if len(left) != len(right):
        raise NotRegular("sides differ in size")
    colours = [0] * len(edges)
    remaining = list(range(len(edges)))
    for colour in range(1, d + 1):
        by_pair: dict = {}
        adj: dict = {}
        for e in remaining:
            u, v = edges[e]
            by_pair.setdefault((u, v), []).append(e)
            adj.setdefault(u, []).append(v)
        match = max_bipartite_matching(adj)
        if len(match) != len(left):
            raise NotRegular("no perfect matching in the remaining graph")
        used = set()
        for u, v in match.items():
            e = by_pair[(u, v)][0]
            colours[e] = colour
            used.add(e)
        remaining = [e for e in remaining if e not in used]
    return colours


def fill_back_entries(box, cells, symbols) -> np.ndarray:
    """Fill the back layers r+1..n of an r x r x n partial latin box.

    ``cells`` is the set U of 1-based pairs (i, j) whose lines (i, j, .) are
    empty beyond layer r; ``symbols`` is V with |V| = n - r.  An edge
    colouring of U with n - r colours picks the symbol of layer r+1; later
    layers take the next symbol of V (ascending, cyclic).
    """
    arr = np.array(box, dtype=DTYPE, copy=True)
    if arr.ndim != 3 or arr.shape[0] != arr.shape[1]:
        raise DimensionMismatch(f"box must be r x r x n, got {arr.shape}")
    r, _, n = arr.shape
    vs = sorted(int(x) for x in symbols)
    m = n - r
    if len(vs) != m or len(set(vs)) != m:
        raise HypothesisViolated(f"need {m} distinct symbols in V", tuple(vs))
    cells = sorted({(int(i), int(j)) for i, j in cells})
    in_u = np.zeros((r, r), dtype=bool)
    for i, j in cells:
        if not (1 <= i <= r and 1 <= j <= r):
            raise HypothesisViolated("cell of U outside the box", (i, j))
        in_u[i - 1, j - 1] = True
    if m == 0:
        if cells:
            raise HypothesisViolated("U must be empty when r = n")
        return arr
    front, back = arr[:, :, :r], arr[:, :, r:]
    vmask = np.isin(arr, vs)
    if (front == 0).any():
        raise HypothesisViolated("front layers must be filled", tuple(int(x) + 1 for x in np.argwhere(front == 0)[0]))
    if vmask[:, :, :r][in_u].any():
        raise HypothesisViolated("lines of U hold symbols of V in the front")
    if (back[in_u] != 0).any():
        raise HypothesisViolated("lines of U must be empty in the back")
    if (back[~in_u] == 0).any():
        raise HypothesisViolated("back cells outside U must be filled")
    if vmask[:, :, r:].any():
        raise HypothesisViolated("back layers already hold symbols of V")
    rows = in_u.sum(axis=1)
    cols = in_u.sum(axis=0)
    if (rows != m).any() or (cols != m).any():
        raise HypothesisViolated(f"U must have {m} cells in every row and column")
    colours = equitable_coloring_regular([(i, j) for i, j in cells], m)
    for (i, j), c in zip(cells, colours):
        for t in range(m):
            arr[i - 1, j - 1, r + t] = vs[(c - 1 + t) % m]
    return arr
