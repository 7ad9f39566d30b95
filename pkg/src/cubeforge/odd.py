"""Realizations of (a, a, b) for a = 1, 5 (mod 6) and a/2 <= b < a.

Two cyclic cubes A and B over Z_a give partial cubes of order a + b
(extensions of A by B), a layer-shifted partner, and a completion driven
by an auxiliary square L.  Thirteen placements of these pieces, two
completion passes and three diagonal subcubes make the order-(2a+b) cube.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import ceil

import numpy as np

from cubeforge.assembly import WriteOnceGrid
from cubeforge.basic import diagonal_realization, is_partial_square, plain_cube
from cubeforge.completion import complete_right_corner_channel, fill_back_entries
from cubeforge.core import DTYPE, Realization, VerificationReport, Violation, verify_partial
from cubeforge.errors import (
    AgreementViolated,
    BadResidue,
    BRangeTooSmall,
    ConstructionFailed,
    OrderMismatch,
    OutOfTheoremRange,
    RuleConflict,
    TilingChainBroken,
)


def _check_residue(a):
    if a < 1 or a % 6 not in (1, 5):
        raise BadResidue(f"a must be 1 or 5 mod 6, got {a}")


def _grid(a):
    idx = np.arange(1, a + 1)
    return idx[:, None, None], idx[None, :, None], idx[None, None, :]


def base_pair(a) -> tuple[np.ndarray, np.ndarray]:
    """A = -i+j+k and B = -i-j+2k+1 (mod a)."""
    _check_residue(a)
    i, j, k = _grid(a)
    A = (-i + j + k - 1) % a + 1
    B = (-i - j + 2 * k + 1 - 1) % a + 1
    return A.astype(DTYPE), B.astype(DTYPE)


def shifted_set(S, k, a) -> set[int]:
    """S_k = {s + k - 1 (mod a)}."""
    return {(s + k - 2) % a + 1 for s in S}


def partner_set(S, k, a, b) -> set[int]:
    """S'_k = {s + k + b - 2 (mod a)}, the symbols the shifted partner moves in layer k."""
    return shifted_set(S, k + b - 1, a)


def extend_with_S(A, B, S, b) -> np.ndarray:
    """The extension A_S of order a + b.

    Where B holds m in [b] and A's symbol lies in S_k, the centre cell takes
    a + m and A's symbol moves to the three boundary cells (a+m, j, k),
    (i, a+m, k) and (i, j, a+m).
    """
    A = np.asarray(A, dtype=np.int64)
    B = np.asarray(B, dtype=np.int64)
    a = A.shape[0]
    if B.shape != A.shape:
        raise OrderMismatch(f"A has order {a}, B has shape {B.shape}")
    in_s = np.zeros(a + 1, dtype=bool)
    for s in S:
        if not 1 <= s <= a:
            raise ValueError(f"S must be a subset of [{a}], got {s}")
        in_s[s] = True
    _, _, k = _grid(a)
    # A(i,j,k) lies in S_k exactly when A - k + 1 (mod a) lies in S
    moved = (B <= b) & in_s[(A - k) % a + 1]
    out = np.zeros((a + b,) * 3, dtype=DTYPE)
    out[:a, :a, :a] = np.where(moved, a + B, A)
    ii, jj, kk = np.nonzero(moved)
    m = B[moved] - 1
    sym = A[moved]
    for target in ((a + m, jj, kk), (ii, a + m, kk), (ii, jj, a + m)):
        flat = np.ravel_multi_index(target, out.shape)
        if len(np.unique(flat)) != len(flat):
            raise RuleConflict("two centre cells send a symbol to the same boundary cell")
        out[target] = sym
    return out


@dataclass(frozen=True)
class ShiftedPartner:
    """A'_S together with the i-layer and k-layer maps that produced it.

    ``cube[i, j, k] = source[rows[i], j, files[k]]`` with 0-based index maps.
    """

    cube: np.ndarray = field(repr=False)
    rows: tuple
    files: tuple

    def apply(self, cube) -> np.ndarray:
        arr = np.asarray(cube)
        return arr[np.ix_(list(self.rows), range(arr.shape[1]), list(self.files))]


def shift_map(a, b) -> tuple:
    """0-based index map x -> x + b - 1 (mod a) on [a], identity beyond."""
    return tuple(list((np.arange(a) + b - 1) % a) + list(range(a, a + b)))


def shifted_partner(A_S, a, b) -> ShiftedPartner:
    if 2 * b < a:
        raise BRangeTooSmall(f"the shifted partner needs b >= a/2, got a={a}, b={b}")
    arr = np.asarray(A_S)
    if arr.shape != (a + b,) * 3:
        raise OrderMismatch(f"expected order {a + b}, got {arr.shape}")
    sigma = list(shift_map(a, b))
    cube = arr[np.ix_(sigma, range(a + b), sigma)].astype(DTYPE)
    return ShiftedPartner(cube, tuple(sigma), tuple(sigma))


def _discover_layer_maps(A_S, other, a):
    """Find row and file permutations of [a] turning A_S into ``other``, or None."""
    n = A_S.shape[0]

    def file_key(c, k):
        rows = sorted(c[i, :, k].tobytes() for i in range(a))
        return c[a:, :, k].tobytes(), tuple(rows)

    if (A_S[a:, :, a:] != other[a:, :, a:]).any():
        return None
    pool: dict = {}
    for k in range(a):
        pool.setdefault(file_key(A_S, k), []).append(k)
    files = []
    for k in range(a):
        bucket = pool.get(file_key(other, k))
        if not bucket:
            return None
        files.append(bucket.pop(0))
    files += list(range(a, n))
    moved = A_S[:, :, files]
    by_row: dict = {}
    for i in range(a):
        by_row.setdefault(moved[i].tobytes(), []).append(i)
    rows = []
    for i in range(a):
        bucket = by_row.get(other[i].tobytes())
        if not bucket:
            return None
        rows.append(bucket.pop(0))
    rows += list(range(a, n))
    return rows, files


def check_shifted_partner(A_S, partner, a, b, S, *, rows=None, files=None) -> VerificationReport:
    """Check the four shifted-partner bullets; kinds are ``bullet 1``..``bullet 4``.

    ``partner`` may be a ShiftedPartner (its maps are used) or a bare cube,
    in which case the layer permutations are searched for.
    """
    A_S = np.asarray(A_S)
    if isinstance(partner, ShiftedPartner):
        rows, files = list(partner.rows), list(partner.files)
        partner = partner.cube
    P = np.asarray(partner)
    if P.shape != A_S.shape or A_S.shape != (a + b,) * 3:
        raise OrderMismatch(f"orders differ: {A_S.shape} vs {P.shape}")
    violations = []
    if rows is None or files is None:
        found = _discover_layer_maps(A_S, P, a)
        if found is None:
            violations.append(Violation("bullet 1", detail="no layer permutations map A_S onto the partner"))
        else:
            rows, files = found
    if rows is not None and files is not None:
        image = A_S[np.ix_(rows, range(a + b), files)]
        for cell in np.argwhere(image != P)[:16]:
            violations.append(Violation("bullet 1", tuple(int(x) + 1 for x in cell), int(P[tuple(cell)]),
                                        "differs from the layer-permuted copy"))
    jA = A_S[:a, a:, :a] != 0
    jP = P[:a, a:, :a] != 0
    for cell in np.argwhere(jA != jP)[:16]:
        i, m, k = (int(x) for x in cell)
        violations.append(Violation("bullet 2", (i + 1, a + m + 1, k + 1), detail="j-boundary support differs"))
    both = (A_S[:a, :a, a:] != 0) & (P[:a, :a, a:] != 0)
    for cell in np.argwhere(both)[:16]:
        i, j, m = (int(x) for x in cell)
        violations.append(Violation("bullet 3", (i + 1, j + 1, a + m + 1), detail="both k-boundaries filled"))
    for k in range(1, a + 1):
        sk = np.array(sorted(shifted_set(S, k, a)), dtype=np.int64)
        bad = np.isin(P[:a, a:, k - 1], sk)
        for cell in np.argwhere(bad)[:4]:
            i, m = (int(x) for x in cell)
            violations.append(Violation("bullet 4", (i + 1, a + m + 1, k), int(P[i, a + m, k - 1]),
                                        "j-boundary symbol lies in S_k"))
    return VerificationReport.from_violations(violations)


# ---------------------------------------------------------------------------
# the squares K and L


def build_g(a) -> int:
    """The inverse of 3 modulo a."""
    _check_residue(a)
    g = (2 * a + 1) // 3 if a % 6 == 1 else (a + 1) // 3
    if (3 * g) % a != 1 % a:
        raise BadResidue(f"3*{g} is not 1 mod {a}")
    return g


def k_value(a, s) -> int:
    """K(i, j) depends on s = i + j only."""
    g = build_g(a)
    return ((a + 3) // 2 * (s + 2 - 2 * g) - 1) % a or a


def build_K(a) -> np.ndarray:
    """K indexed by residues: ``K[r, c]`` is K(r, c) for r, c in 0..a-1."""
    g = build_g(a)
    s = np.arange(a)[:, None] + np.arange(a)[None, :]
    return (((a + 3) // 2 * (s + 2 - 2 * g) - 1 - 1) % a + 1).astype(DTYPE)


BANDS = ("[a-b]", "U", "V", "W")
SUBBLOCKS = ("[a-b]", "U1", "U2", "V1", "V2", "W1", "W2", "W3")


@dataclass(frozen=True)
class TilingSpec:
    """Band lengths, column widths and K-indices for the b x b tiling of L."""

    a: int
    b: int
    x: int
    y: int
    d1: int
    d2: int
    row_lengths: tuple
    widths: tuple
    index: dict  # (band, subblock) -> index; the ([a-b], [a-b]) corner is absent

    def check_chains(self):
        """Every row band and every column sub-block must cycle through Z_a."""
        a = self.a
        for band, length in zip(BANDS[1:], self.row_lengths[1:]):
            if length > 0:
                spans = [(self.index[(band, col)], w) for col, w in zip(SUBBLOCKS, self.widths)]
                _chain(spans, a, f"row band {band}")
        for col, w in zip(SUBBLOCKS[1:], self.widths[1:]):
            if w > 0:
                spans = [(self.index[(band, col)], h) for band, h in zip(BANDS, self.row_lengths)]
                _chain(spans, a, f"column block {col}")


def _chain(spans, a, where):
    seen = np.zeros(a, dtype=np.int64)
    for start, width in spans:
        if width < 0:
            raise TilingChainBroken(f"{where}: negative size {width}")
        for off in range(width):
            seen[(start + off) % a] += 1
    if (seen != 1).any():
        raise TilingChainBroken(f"{where}: indices do not tile Z_{a} (coverage {seen.tolist()})")


def tiling_spec(a, b) -> TilingSpec:
    _check_residue(a)
    if not (ceil(a / 2) <= b < a):
        raise OutOfTheoremRange(f"tiling needs a/2 <= b < a, got a={a}, b={b}")
    d1 = 1 if b % 3 == 1 else 0
    d2 = 1 if b % 3 == 2 else 0
    y = (b - d1 + d2) // 3
    rows = (a - b, y + d1, y, y - d2)
    if a % 6 == 5:
        x = (a + 1) // 3
        widths = (a - b, -x + 2 * y + d1, x - y, -x + 2 * y + d1 - d2, x - y - d1 + d2,
                  -x + 2 * y + d1, x - y - 1, 1 - d1 - d2)
        table = {
            "[a-b]": (None, 0, -x + 2 * y + d1, x, 2 * y + d1 - d2, -x + 1, x + 2 * y + d1, -x + y + d1),
            "U": (0, -3 * y - d1 + d2, -x, x - 2 * y - d1 + d2, -y, -x - y + 1 - d1, x + y, -x - y + d2),
            "V": (x, -y, -x + y + d1, x - 3 * y - d1 + d2, d1, -x - 2 * y + 1 - d1, x - y + d2, -x - 2 * y + d2),
            "W": (-x + 1, -2 * y + d2, -x - y + d2, x - y + d2, y + d1, -x - 3 * y + 1 - d1 + d2, x + d2, -x + d1 + d2),
        }
    else:
        x = (a - 1) // 3
        widths = (a - b, -x + 2 * y - d2, x - y + d1 + d2, -x + 2 * y - d2, x - y + d2,
                  -x + 2 * y - 1 + d1, x - y + 1 - 2 * d1 - d2, d1)
        table = {
            "[a-b]": (None, 0, -x + 2 * y - d2, -x, x + 2 * y + 1 - d2, x + 1, 2 * y + d1, x + y + 1 - d1 - d2),
            "U": (0, -3 * y - d1 + d2, -x - d1, -x - y - d1, x + y + 1 - d1 - d2, x - 2 * y + 1 - d1, -y + d2,
                  x - 2 * y + 1 - 2 * d1),
            "V": (-x, -2 * y + d2, -x - y - d1, -x - 3 * y - d1 + d2, x + 1 - d1 - d2, x - y + 1, y + d1, x - y + 1 - d1),
            "W": (x + 1, -y + d2, -x + y, -x - 2 * y - d1 + d2, x - y + 1 - d1, x - 3 * y + 1 - d1 + d2, d1 + d2,
                  x + 1 - d1),
        }
    index = {(band, col): val % a for band in BANDS for col, val in zip(SUBBLOCKS, table[band]) if val is not None}
    spec = TilingSpec(a, b, x, y, d1, d2, rows, widths, index)
    if sum(widths) != a or sum(widths[1:3]) != rows[1] or sum(widths[3:5]) != rows[2] or sum(widths[5:]) != rows[3]:
        raise TilingChainBroken(f"widths {widths} do not match bands {rows}")
    spec.check_chains()
    return spec


def band_order(a, b) -> list[int]:
    """Rows (and columns) of L in the order [a-b], U, V, W (1-based)."""
    spec = tiling_spec(a, b)
    base = a - b
    u = [base - 2 + 3 * i for i in range(1, spec.row_lengths[1] + 1)]
    v = [base - 1 + 3 * i for i in range(1, spec.row_lengths[2] + 1)]
    w = [base + 3 * i for i in range(1, spec.row_lengths[3] + 1)]
    return list(range(1, base + 1)) + u + v + w


def prescribed_L(a, b) -> np.ndarray:
    """The closed-form part of L; the two diagonal blocks stay empty."""
    c = a - b
    L = np.zeros((a, a), dtype=DTYPE)
    p, q = (a + 3) // 2, (a + 1) // 2
    for i in range(1, b + 1):
        for j in range(1, c + 1):
            L[i + c - 1, j - 1] = (p * j + q * i - 1 - 1) % a + 1
    for i in range(1, c + 1):
        for j in range(1, b + 1):
            L[i - 1, j + c - 1] = (p * i + q * j - 1 - 1) % a + 1
    return L


def build_L(a, b) -> np.ndarray:
    """Order-a square whose only empty cells form the top-left (a-b)^2 block."""
    spec = tiling_spec(a, b)
    order = band_order(a, b)
    row_start = np.cumsum((0,) + spec.row_lengths)
    col_start = np.cumsum((0,) + spec.widths)
    L = np.zeros((a, a), dtype=DTYPE)
    for bi, band in enumerate(BANDS):
        for ci, col in enumerate(SUBBLOCKS):
            if (band, col) not in spec.index:
                continue
            idx = spec.index[(band, col)]
            for p in range(spec.row_lengths[bi]):
                for q in range(spec.widths[ci]):
                    r = order[row_start[bi] + p] - 1
                    c = order[col_start[ci] + q] - 1
                    L[r, c] = k_value(a, idx + p + q)
    closed = prescribed_L(a, b)
    mask = closed != 0
    if (L[mask] != closed[mask]).any():
        raise TilingChainBroken("tiling disagrees with the closed form on the prescribed cells")
    if not is_partial_square(L):
        raise TilingChainBroken("tiled square repeats a symbol in a row or column")
    return L


# ---------------------------------------------------------------------------
# completion of A_S


def _place(out, index, values, what):
    target = out[index]
    clash = (target != 0) & (values != 0)
    if clash.any():
        raise AgreementViolated(f"{what} would overwrite {int(clash.sum())} filled cells")
    out[index] = np.where(values != 0, values, target)


def complete_extension(A_S, L, a, b) -> np.ndarray:
    """Fill A_S (with S = [a-b]) to a latin cube of order a + b."""
    A, B = base_pair(a)
    A = A.astype(np.int64)
    B = B.astype(np.int64)
    original = np.asarray(A_S, dtype=DTYPE)
    if original.shape != (a + b,) * 3:
        raise OrderMismatch(f"expected order {a + b}, got {original.shape}")
    out = original.copy()
    i, j, k = _grid(a)
    i, j, k = np.broadcast_arrays(i, j, k)
    in_s = (A - k) % a + 1 <= a - b
    stay = (B <= b) & ~in_s
    ii, jj, kk = i[stay] - 1, j[stay] - 1, k[stay] - 1
    m = B[stay] - 1

    layer = np.zeros_like(out)
    layer[a + m, jj, kk] = a + (k[stay] - A[stay] - 1) % a + 1
    _place(out, (slice(None),) * 3, layer, "i-boundary fill")

    layer = np.zeros_like(out)
    layer[ii, a + m, kk] = a + (A[stay] - k[stay] + b) % a + 1
    _place(out, (slice(None),) * 3, layer, "j-boundary fill")

    back = out[:a, :a, :]
    cells = [(r + 1, c + 1) for r, c in zip(*np.nonzero(back[:, :, a] == 0))]
    out[:a, :a, :] = fill_back_entries(back, cells, range(a + 1, a + b + 1))

    out[:, :, :a] = complete_right_corner_channel(out[:, :, :a], b)

    mm = np.arange(1, b + 1)
    jv = np.arange(1, a + 1)
    vals = ((a + 1) // 2 * (mm[:, None, None] + mm[None, None, :] - b) + jv[None, :, None] - 1 - 1) % a + 1
    _place(out, (slice(a, None), slice(0, a), slice(a, None)), vals.astype(DTYPE), "ik-boundary fill")

    corner = np.asarray(L, dtype=np.int64)[a - b:, a - b:]
    iv = np.arange(1, a + 1)
    vals = (corner[None, :, :] + iv[:, None, None] - 1 - 1) % a + 1
    _place(out, (slice(0, a), slice(a, None), slice(a, None)), vals.astype(DTYPE), "jk-boundary fill")

    _place(out, (slice(a, None),) * 3, plain_cube(b, a), "corner subcube")

    filled = original != 0
    if (out[filled] != original[filled]).any():
        raise AgreementViolated("completion changed a cell of A_S")
    if (out == 0).any():
        raise ConstructionFailed(f"completion left {int((out == 0).sum())} cells empty")
    return out


# ---------------------------------------------------------------------------
# assembly


def _relabel(cube, a, b, *, shift_low):
    """C copy: a+s -> 2a+s.  With ``shift_low`` also x -> a+x on [a] (D copy)."""
    arr = np.asarray(cube, dtype=np.int64)
    out = np.where(arr > a, arr + a, arr)
    if shift_low:
        out = np.where((arr >= 1) & (arr <= a), arr + a, out)
    return out.astype(DTYPE)


PARTS = {
    "centre": ((0, 0, 0), None),
    "i": ((1, 0, 0), (2, None, None)),
    "j": ((0, 1, 0), (None, 2, None)),
    "k": ((0, 0, 1), (None, None, 2)),
    "ik": ((1, 0, 1), (2, None, 2)),
    "jk": ((0, 1, 1), (None, 2, 2)),
}

# (array, block of its centre, parts placed)
PLACEMENTS = (
    ("D_S", (1, 2, 1), ("centre", "i", "k")),
    ("D*_S", (1, 2, 1), ("j", "ik")),
    ("D'_S", (2, 1, 1), ("centre", "j", "k")),
    ("D'*_S", (2, 1, 1), ("i", "jk")),
    ("C_T", (2, 2, 1), ("centre", "i", "j", "k")),
    ("D_T", (1, 1, 2), ("centre", "i", "j", "k")),
    ("C'_S", (1, 2, 2), ("centre", "j", "k")),
    ("C'*_S", (1, 2, 2), ("i", "jk")),
    ("C_S", (2, 1, 2), ("centre", "i", "k")),
    ("C*_S", (2, 1, 2), ("j", "ik")),
)


def odd_pieces(a, b) -> dict:
    """All relabelled order-(a+b) arrays the assembly places."""
    A, B = base_pair(a)
    S = range(1, a - b + 1)
    T = range(a - b + 1, a + 1)
    A_S = extend_with_S(A, B, S, b)
    A_T = extend_with_S(A, B, T, b)
    partner = shifted_partner(A_S, a, b)
    star = complete_extension(A_S, build_L(a, b), a, b)
    star_partner = partner.apply(star)
    raw = {"_S": A_S, "'_S": partner.cube, "*_S": star, "'*_S": star_partner, "_T": A_T}
    pieces = {}
    for suffix, arr in raw.items():
        pieces["C" + suffix] = _relabel(arr, a, b, shift_low=False)
        pieces["D" + suffix] = _relabel(arr, a, b, shift_low=True)
    return pieces


def _block(x, a):
    start = (0, a, 2 * a)[x - 1]
    return start


def odd_assembly(a, b) -> WriteOnceGrid:
    """Place every piece and fill the two remaining regions; all through one write-once grid."""
    n = 2 * a + b
    grid = WriteOnceGrid(n)
    pieces = odd_pieces(a, b)
    for x, offset in ((1, 0), (2, a)):
        sl = slice(_block(x, a), _block(x, a) + a)
        grid.put((sl, sl, sl), plain_cube(a, offset), f"subcube {x}")
    tail = slice(2 * a, n)
    grid.put((tail, tail, tail), plain_cube(b, 2 * a), "subcube 3")
    for name, centre, parts in PLACEMENTS:
        src = pieces[name]
        for part in parts:
            pick, moved = PARTS[part]
            src_sl = tuple(slice(a, a + b) if p else slice(0, a) for p in pick)
            dest = []
            for axis, c in enumerate(centre):
                if moved is not None and moved[axis] is not None:
                    dest.append(slice(2 * a, n))
                else:
                    dest.append(slice(_block(c, a), _block(c, a) + a))
            grid.put(tuple(dest), src[src_sl], f"{name} {part}")
    front = grid.cube[:, :, : 2 * a]
    grid.fill_empty(_with_front(grid.cube, complete_right_corner_channel(front, b)), "corner channel")
    back = grid.cube[: 2 * a, : 2 * a, :]
    cells = [(r + 1, c + 1) for r, c in zip(*np.nonzero(back[:, :, 2 * a] == 0))]
    done = fill_back_entries(back, cells, range(2 * a + 1, n + 1))
    full = grid.cube.copy()
    full[: 2 * a, : 2 * a, :] = done
    grid.fill_empty(full, "back entries")
    return grid


def _with_front(cube, front):
    out = np.array(cube, copy=True)
    out[:, :, : front.shape[2]] = front
    return out


def assemble_odd(a, b) -> Realization:
    _check_residue(a)
    if not (ceil(a / 2) <= b < a):
        raise OutOfTheoremRange(f"assembly needs a/2 <= b < a, got a={a}, b={b}")
    grid = odd_assembly(a, b)
    if grid.holes:
        raise ConstructionFailed(f"assembly left {grid.holes} cells empty")
    real = Realization((a, a, b), grid.cube)
    rep = real.check()
    if not rep.valid:
        raise ConstructionFailed(str(rep))
    return real


def construct_odd(a, b) -> Realization:
    if a % 6 not in (1, 5) or not (ceil(a / 2) <= b <= a):
        raise OutOfTheoremRange(f"({a},{a},{b}) needs a = 1, 5 (mod 6) and a/2 <= b <= a")
    if b == a:
        return diagonal_realization(a, 3)
    return assemble_odd(a, b)
