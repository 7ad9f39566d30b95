"""Pure-Python implementations of the hot loops.

These mirror ``_kernels.pyx`` exactly (same results, same ordering) and are
used when the compiled extension is unavailable.
"""

import numpy as np

# axis 0: file (i, j, .), axis 1: row (i, ., k), axis 2: column (., j, k)
_LINE_VIEWS = ((0, 1, 2), (0, 2, 1), (1, 2, 0))


def line_duplicates(cube, limit):
    """Find symbols repeated inside a line, ignoring empty cells (0).

    Returns ``(found, total)`` where ``found`` holds up to ``limit`` tuples
    ``(axis, x, y, symbol)`` with 0-based line coordinates, in the order
    files, rows, columns and lexicographic within each family.
    """
    cube = np.asarray(cube)
    found = []
    total = 0
    for axis, order in enumerate(_LINE_VIEWS):
        lines = np.sort(cube.transpose(order), axis=-1)
        dup = (lines[..., 1:] == lines[..., :-1]) & (lines[..., 1:] > 0)
        # count each repeated symbol once per line
        first = dup.copy()
        first[..., 1:] &= ~dup[..., :-1]
        xs, ys, ps = np.nonzero(first)
        total += len(xs)
        for x, y, p in zip(xs, ys, ps):
            if len(found) >= limit:
                break
            found.append((axis, int(x), int(y), int(lines[x, y, p + 1])))
    return found, total


def _line_cells(n):
    """For every cell, the flat indices of the three lines through it."""
    lines = []
    for idx in range(n * n * n):
        i, rem = divmod(idx, n * n)
        j, k = divmod(rem, n)
        file_ = [(i * n + j) * n + kk for kk in range(n)]
        row = [(i * n + jj) * n + k for jj in range(n)]
        col = [(ii * n + j) * n + k for ii in range(n)]
        lines.append((file_, row, col))
    return lines


def search(fixed, allowed, n, budget):
    """Depth-first search for a latin cube extending ``fixed``.

    ``fixed`` is a flat sequence of n**3 symbols (0 = free) in (i, j, k)
    order with k fastest; ``allowed`` holds a bitmask of admissible symbols
    per cell (bit s-1 for symbol s).  Cells are filled in flat order, lowest
    symbol first, with forward checking on all three lines of the assigned
    cell.

    Returns ``(status, solution, nodes)`` with status 1 (found), 0
    (exhausted) or -1 (budget exceeded).
    """
    size = n * n * n
    cells = [int(x) for x in fixed]
    allowed = [int(x) for x in allowed]
    full = (1 << n) - 1
    used_f = [0] * (n * n)
    used_r = [0] * (n * n)
    used_c = [0] * (n * n)
    for idx in range(size):
        s = cells[idx]
        if s:
            i, rem = divmod(idx, n * n)
            j, k = divmod(rem, n)
            bit = 1 << (s - 1)
            used_f[i * n + j] |= bit
            used_r[i * n + k] |= bit
            used_c[j * n + k] |= bit
    free = [idx for idx in range(size) if cells[idx] == 0]
    lines = _line_cells(n)
    coords = [(idx // (n * n), (idx // n) % n, idx % n) for idx in range(size)]

    def domain(idx):
        i, j, k = coords[idx]
        return allowed[idx] & ~(used_f[i * n + j] | used_r[i * n + k] | used_c[j * n + k])

    def consistent(idx):
        i, j, k = coords[idx]
        used = (used_f[i * n + j], used_r[i * n + k], used_c[j * n + k])
        for line, u in zip(lines[idx], used):
            missing = full & ~u
            cover = 0
            for other in line:
                if cells[other] == 0:
                    d = domain(other)
                    if d == 0:
                        return False
                    cover |= d
            if cover & missing != missing:
                return False
        return True

    def place(idx, s):
        i, j, k = coords[idx]
        bit = 1 << (s - 1)
        cells[idx] = s
        used_f[i * n + j] |= bit
        used_r[i * n + k] |= bit
        used_c[j * n + k] |= bit

    def unplace(idx):
        i, j, k = coords[idx]
        bit = ~(1 << (cells[idx] - 1))
        cells[idx] = 0
        used_f[i * n + j] &= bit
        used_r[i * n + k] &= bit
        used_c[j * n + k] &= bit

    nfree = len(free)
    nodes = 0
    if nfree == 0:
        return 1, cells, nodes
    cand = [0] * nfree
    p = 0
    cand[0] = domain(free[0])
    while True:
        if cand[p] == 0:
            p -= 1
            if p < 0:
                return 0, None, nodes
            unplace(free[p])
            continue
        low = cand[p] & -cand[p]
        cand[p] ^= low
        nodes += 1
        if nodes > budget:
            return -1, None, nodes
        idx = free[p]
        place(idx, low.bit_length())
        if consistent(idx):
            p += 1
            if p == nfree:
                return 1, cells, nodes
            cand[p] = domain(free[p])
        else:
            unplace(idx)
