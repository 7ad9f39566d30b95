"""Latin cube model: storage conventions, verification and realizations.

A cube of order n is an ``(n, n, n)`` integer array ``c`` with
``c[i-1, j-1, k-1]`` holding the symbol at cell (i, j, k).  Symbols are
1..n and 0 marks an empty cell of a partial cube.  Coordinates and symbols
in the public API are 1-based.

Line names follow the third coordinate being the layer:

* file   (i, j, .)  -- fixed i and j
* row    (i, ., k)  -- fixed i and k
* column (., j, k)  -- fixed j and k
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Sequence

import numpy as np

from cubeforge import kernels
from cubeforge.errors import (
    CellOutOfRange,
    DimensionMismatch,
    LengthMismatch,
    OrderMismatch,
    PartitionMismatch,
    PlacementOutOfRange,
)

MAX_ORDER = 1024
MAX_VIOLATIONS = 16
DTYPE = np.int32

LINE_KINDS = ("file", "row", "column")


def residue(x, a):
    """Reduce ``x`` modulo ``a`` into 1..a (0 maps to a)."""
    return (x - 1) % a + 1


@dataclass(frozen=True)
class Violation:
    """One reason a checked object is not what it claims to be.

    ``kind`` names the failed property, ``where`` locates it (1-based) and
    ``symbol`` is the offending symbol when there is one.
    """

    kind: str
    where: tuple = ()
    symbol: int | None = None
    detail: str = ""

    def __str__(self):
        text = self.kind
        if self.where:
            text += " at " + _format_where(self.where)
        if self.symbol is not None:
            text += f" (symbol {self.symbol})"
        if self.detail:
            text += f": {self.detail}"
        return text


def _format_where(where):
    if all(isinstance(w, int) or w is None for w in where):
        return "(" + ",".join("*" if w is None else str(w) for w in where) + ")"
    return str(where)


@dataclass(frozen=True)
class VerificationReport:
    """Outcome of a check: valid flag plus at most 16 violations."""

    valid: bool
    violations: tuple = ()
    truncated: bool = False

    def __bool__(self):
        return self.valid

    @classmethod
    def from_violations(cls, violations, total=None):
        violations = list(violations)
        total = len(violations) if total is None else total
        return cls(
            valid=total == 0,
            violations=tuple(violations[:MAX_VIOLATIONS]),
            truncated=total > MAX_VIOLATIONS,
        )

    def kinds(self):
        return {v.kind for v in self.violations}

    def __str__(self):
        if self.valid:
            return "Valid"
        lines = ["Invalid"] + [f"  {v}" for v in self.violations]
        if self.truncated:
            lines.append("  ...")
        return "\n".join(lines)


# ---------------------------------------------------------------------------
# arrays


def as_cube(c, *, allow_empty=True) -> np.ndarray:
    """Validate the shape of a cube-like table and return it as an array."""
    try:
        arr = np.asarray(c)
    except ValueError as exc:  # ragged nested lists
        raise DimensionMismatch(f"not a rectangular table: {exc}") from None
    if arr.dtype == object or arr.ndim != 3:
        raise DimensionMismatch(f"expected a 3-dimensional table, got shape {arr.shape}")
    n = arr.shape[0]
    if arr.shape != (n, n, n) or n < 1:
        raise DimensionMismatch(f"table of shape {arr.shape} is not a cube of one order")
    if n > MAX_ORDER:
        raise DimensionMismatch(f"order {n} exceeds {MAX_ORDER}")
    if not np.issubdtype(arr.dtype, np.integer):
        raise DimensionMismatch(f"cells must be integers, got {arr.dtype}")
    return np.ascontiguousarray(arr, dtype=DTYPE)


def frozen(arr) -> np.ndarray:
    arr = np.array(arr, dtype=DTYPE, copy=True)
    arr.flags.writeable = False
    return arr


def order_of(c) -> int:
    return np.asarray(c).shape[0]


# ---------------------------------------------------------------------------
# line checks


def _line_where(axis, x, y):
    if axis == 0:
        return (x + 1, y + 1, None)
    if axis == 1:
        return (x + 1, None, y + 1)
    return (None, x + 1, y + 1)


def _duplicate_violations(arr):
    found, total = kernels.line_duplicates(arr, MAX_VIOLATIONS)
    out = [
        Violation(f"duplicate in {LINE_KINDS[axis]}", _line_where(axis, x, y), s)
        for axis, x, y, s in found
    ]
    return out, total


def _range_violations(arr, allow_empty):
    n = arr.shape[0]
    low = 0 if allow_empty else 1
    bad = np.argwhere((arr < low) | (arr > n))
    out = [
        Violation("empty cell" if arr[tuple(b)] == 0 else "symbol out of range",
                  tuple(int(v) + 1 for v in b), int(arr[tuple(b)]))
        for b in bad[:MAX_VIOLATIONS]
    ]
    return out, len(bad)


def _lines_report(c, allow_empty):
    arr = as_cube(c)
    rng, rng_total = _range_violations(arr, allow_empty)
    clean = np.where((arr >= 0) & (arr <= arr.shape[0]), arr, 0).astype(DTYPE)
    dup, dup_total = _duplicate_violations(clean)
    return VerificationReport.from_violations(rng + dup, rng_total + dup_total)


def verify_cube(c) -> VerificationReport:
    """Check that every line of a full cube is a permutation of [n]."""
    return _lines_report(c, allow_empty=False)


def verify_partial(c) -> VerificationReport:
    """Check that no symbol repeats in a line (empty cells are ignored)."""
    return _lines_report(c, allow_empty=True)


def is_latin(c) -> bool:
    return verify_cube(c).valid


# ---------------------------------------------------------------------------
# subcubes and realizations


@dataclass(frozen=True)
class SubcubePlacement:
    """Coordinates and symbols of a claimed subcube (all 1-based)."""

    rows: tuple
    cols: tuple
    files: tuple
    symbols: tuple

    def __init__(self, rows, cols, files, symbols):
        object.__setattr__(self, "rows", tuple(sorted(int(x) for x in rows)))
        object.__setattr__(self, "cols", tuple(sorted(int(x) for x in cols)))
        object.__setattr__(self, "files", tuple(sorted(int(x) for x in files)))
        object.__setattr__(self, "symbols", tuple(sorted(int(x) for x in symbols)))

    @property
    def size(self):
        return len(self.rows)


def check_disjoint_subcubes(c, placements: Sequence[SubcubePlacement]) -> VerificationReport:
    """Each placement must carry a latin subcube; placements must be disjoint."""
    arr = as_cube(c)
    n = arr.shape[0]
    violations = []
    for idx, p in enumerate(placements):
        for name in ("rows", "cols", "files", "symbols"):
            values = getattr(p, name)
            if any(v < 1 or v > n for v in values):
                raise PlacementOutOfRange(f"placement {idx + 1}: {name} outside [{n}]")
            if len(set(values)) != len(values):
                raise PlacementOutOfRange(f"placement {idx + 1}: repeated {name}")
        m = p.size
        if not (len(p.cols) == len(p.files) == len(p.symbols) == m):
            violations.append(Violation("placement sizes differ", (idx + 1,)))
            continue
        sub = arr[np.ix_([r - 1 for r in p.rows], [x - 1 for x in p.cols], [f - 1 for f in p.files])]
        allowed = np.isin(sub, p.symbols)
        if not allowed.all():
            bad = tuple(int(v) for v in np.argwhere(~allowed)[0])
            cell = (p.rows[bad[0]], p.cols[bad[1]], p.files[bad[2]])
            violations.append(Violation("symbol outside subcube", cell, int(arr[tuple(x - 1 for x in cell)])))
            continue
        relabel = {s: t for t, s in enumerate(p.symbols, start=1)}
        local = np.vectorize(relabel.__getitem__, otypes=[DTYPE])(sub) if m else sub
        rep = verify_cube(local) if m else VerificationReport(True)
        if not rep.valid:
            violations.append(Violation("subcube not latin", (idx + 1,), detail=str(rep.violations[0])))
    for (x, p), (y, q) in combinations(enumerate(placements, start=1), 2):
        for name in ("rows", "cols", "files", "symbols"):
            shared = set(getattr(p, name)) & set(getattr(q, name))
            if shared:
                violations.append(Violation(f"placements share {name}", (x, y), detail=str(sorted(shared))))
    return VerificationReport.from_violations(violations)


def validate_partition(p) -> tuple:
    parts = tuple(int(h) for h in p)
    if not parts or any(h < 1 for h in parts):
        raise PartitionMismatch(f"partition parts must be positive: {p!r}")
    return parts


def block_ranges(partition) -> list[range]:
    """1-based index ranges H_1, ..., H_k of the diagonal blocks."""
    out, start = [], 1
    for h in partition:
        out.append(range(start, start + h))
        start += h
    return out


def diagonal_placements(partition) -> list[SubcubePlacement]:
    return [SubcubePlacement(r, r, r, r) for r in block_ranges(partition)]


def _normal_form_violations(arr, partition):
    out = []
    for m, block in enumerate(block_ranges(partition), start=1):
        lo, hi = block.start - 1, block.stop - 1
        sub = arr[lo:hi, lo:hi, lo:hi]
        bad = np.argwhere((sub < block.start) | (sub >= block.stop))
        for b in bad[:MAX_VIOLATIONS]:
            cell = tuple(int(v) + lo + 1 for v in b)
            out.append(Violation("normal form", cell, int(arr[tuple(v - 1 for v in cell)]),
                                 f"block {m} must hold symbols {block.start}..{block.stop - 1}"))
    return out


def check_realization(c, partition) -> VerificationReport:
    """Latin cube whose diagonal blocks H_m^3 hold only symbols of H_m."""
    arr = as_cube(c)
    parts = validate_partition(partition)
    if sum(parts) != arr.shape[0]:
        raise OrderMismatch(f"partition sums to {sum(parts)}, cube has order {arr.shape[0]}")
    base = verify_cube(arr)
    violations = list(base.violations) + _normal_form_violations(arr, parts)
    total = len(violations) + (1 if base.truncated else 0)
    return VerificationReport.from_violations(violations, total)


def check_partial_realization(c, partition) -> VerificationReport:
    """As check_realization, but empty cells are allowed."""
    arr = as_cube(c)
    parts = validate_partition(partition)
    if sum(parts) != arr.shape[0]:
        raise OrderMismatch(f"partition sums to {sum(parts)}, cube has order {arr.shape[0]}")
    base = verify_partial(arr)
    filled = np.where(arr == 0, -1, arr)
    nf = [v for v in _normal_form_violations(filled, parts) if v.symbol != -1]
    return VerificationReport.from_violations(list(base.violations) + nf, len(base.violations) + len(nf))


def _cells(cells) -> list[tuple[int, int, int]]:
    return [tuple(int(x) for x in cell) for cell in cells]


def check_transversal(c, cells: Iterable) -> VerificationReport:
    """Distinct coordinates per position and distinct symbols (partial allowed)."""
    arr = as_cube(c)
    n = arr.shape[0]
    cells = _cells(cells)
    for cell in cells:
        if len(cell) != 3 or any(x < 1 or x > n for x in cell):
            raise CellOutOfRange(f"cell {cell} outside [{n}]^3")
    violations = []
    for pos, name in enumerate(("first", "second", "third")):
        seen = {}
        for cell in cells:
            if cell[pos] in seen:
                violations.append(Violation(f"repeated {name} coordinate", (seen[cell[pos]], cell)))
            seen.setdefault(cell[pos], cell)
    seen = {}
    for cell in cells:
        s = int(arr[cell[0] - 1, cell[1] - 1, cell[2] - 1])
        if s == 0:
            violations.append(Violation("empty transversal cell", cell))
        elif s in seen:
            violations.append(Violation("repeated symbol", (seen[s], cell), s))
        seen.setdefault(s, cell)
    return VerificationReport.from_violations(violations)


# ---------------------------------------------------------------------------
# realizations and packs


@dataclass(frozen=True)
class Realization:
    """A verified-shape LC(h1...hk) in normal form."""

    partition: tuple
    cube: np.ndarray = field(repr=False)

    def __post_init__(self):
        object.__setattr__(self, "partition", validate_partition(self.partition))
        arr = as_cube(self.cube)
        if arr.shape[0] != sum(self.partition):
            raise OrderMismatch(f"partition sums to {sum(self.partition)}, cube has order {arr.shape[0]}")
        object.__setattr__(self, "cube", frozen(arr))

    @property
    def order(self):
        return self.cube.shape[0]

    def check(self) -> VerificationReport:
        return check_realization(self.cube, self.partition)

    def __eq__(self, other):
        return (isinstance(other, Realization) and self.partition == other.partition
                and np.array_equal(self.cube, other.cube))

    def __hash__(self):
        return hash((self.partition, self.cube.tobytes()))


@dataclass(frozen=True)
class PairedPack:
    """An LC(h1..hk) and LC(h1..h_{k-1}(hk+1)) sharing a partial transversal."""

    first: Realization
    second: Realization
    transversal: tuple

    def __post_init__(self):
        object.__setattr__(self, "transversal", tuple(_cells(self.transversal)))


def check_paired(pack: PairedPack) -> VerificationReport:
    """Check both realizations, the shared transversal and the four pairing bullets.

    Violations of the pairing conditions have kinds ``bullet 1`` .. ``bullet 4``;
    they are listed in bullet order so the first one is the first failing bullet.
    """
    l1, l2 = pack.first, pack.second
    h1, h2 = l1.partition, l2.partition
    if len(h1) != len(h2) or h1[:-1] != h2[:-1] or h2[-1] != h1[-1] + 1:
        raise PartitionMismatch(f"{h2} is not {h1} with the last part increased by one")
    c1, c2 = l1.cube, l2.cube
    n = c2.shape[0]
    k = len(h1)
    m = sum(h1[:-1])
    tail = range(m + 1, n + 1)  # H'_k
    blocks = block_ranges(h1)
    cells = pack.transversal

    violations = []
    for name, real in (("first", l1), ("second", l2)):
        rep = real.check()
        violations += [Violation(f"{name} realization: {v.kind}", v.where, v.symbol) for v in rep.violations]
    if len(cells) != m:
        violations.append(Violation("transversal size", (len(cells),), detail=f"expected {m}"))
    for cell in cells:
        if any(x < 1 or x > n - 1 for x in cell):
            raise CellOutOfRange(f"cell {cell} outside [{n - 1}]^3")
    for name, cube in (("first", c1), ("second", c2)):
        rep = check_transversal(cube, cells)
        violations += [Violation(f"transversal in {name}: {v.kind}", v.where, v.symbol) for v in rep.violations]

    bullets = {1: [], 2: [], 3: [], 4: []}
    for cell in cells:
        i, j, l = cell
        if any(x in tail for x in cell):
            bullets[1].append(Violation("bullet 1", cell, detail="coordinate in the enlarged last block"))
        s1 = int(c1[i - 1, j - 1, l - 1])
        s2 = int(c2[i - 1, j - 1, l - 1])
        if s1 != s2 or s2 in tail:
            bullets[2].append(Violation("bullet 2", cell, s2, detail=f"first has {s1}"))
        for a, block in enumerate(blocks, start=1):
            if all(x in block for x in cell):
                bullets[3].append(Violation("bullet 3", cell, detail=f"inside block {a}"))
        same = [c2[n - 1, n - 1, l - 1], c2[n - 1, j - 1, n - 1], c2[i - 1, n - 1, n - 1]]
        if any(int(v) != s2 for v in same):
            bullets[4].append(Violation("bullet 4", cell, s2, detail="forced copies differ"))
        tops = [c2[n - 1, j - 1, l - 1], c2[i - 1, n - 1, l - 1], c2[i - 1, j - 1, n - 1]]
        if any(int(v) != n for v in tops):
            bullets[4].append(Violation("bullet 4", cell, n, detail="forced cells must hold n"))
    for b in (1, 2, 3, 4):
        violations += bullets[b]
    return VerificationReport.from_violations(violations)


def first_failing_bullet(report: VerificationReport):
    for v in report.violations:
        if v.kind.startswith("bullet "):
            return int(v.kind.split()[1])
    return None


# ---------------------------------------------------------------------------
# isotopy


def _perm_array(p, n, name):
    p = np.asarray(list(p), dtype=np.int64)
    if p.shape != (n,):
        raise LengthMismatch(f"{name} permutation has length {p.shape[0] if p.ndim else 0}, expected {n}")
    if sorted(p.tolist()) != list(range(1, n + 1)):
        raise LengthMismatch(f"{name} is not a permutation of [{n}]")
    return p


def permute(c, rows, cols, files, symbols) -> np.ndarray:
    """Relabel a cube: D(rows(i), cols(j), files(k)) = symbols(C(i, j, k)).

    Each permutation is a sequence whose (x-1)-th entry is the image of x.
    Empty cells stay empty.
    """
    arr = as_cube(c)
    n = arr.shape[0]
    pr = _perm_array(rows, n, "row")
    pc = _perm_array(cols, n, "column")
    pf = _perm_array(files, n, "file")
    ps = _perm_array(symbols, n, "symbol")
    lookup = np.concatenate([[0], ps]).astype(DTYPE)
    out = np.zeros_like(arr)
    out[np.ix_(pr - 1, pc - 1, pf - 1)] = lookup[arr]
    return out


def inverse_permutation(p) -> list[int]:
    inv = [0] * len(p)
    for x, y in enumerate(p, start=1):
        inv[y - 1] = x
    return inv
