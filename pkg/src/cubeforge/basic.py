"""Closed-form latin squares and cubes.

Squares are ``(n, n)`` arrays indexed ``[i-1, j-1]``; cubes follow the
conventions of :mod:`cubeforge.core`.
"""

from __future__ import annotations

from math import gcd

import numpy as np

from cubeforge.core import DTYPE, Realization, as_cube, permute
from cubeforge.errors import ConstructionFailed, DimensionMismatch, NonCoprimeCoefficient, SubcubeTooLarge, SubsquareTooLarge


def _check_coeffs(a, linear):
    if a < 1:
        raise ValueError(f"modulus must be positive, got {a}")
    for idx, coeff in enumerate(linear, start=1):
        if gcd(a, int(coeff)) != 1:
            raise NonCoprimeCoefficient(f"gcd({a}, a{idx}={coeff}) != 1")


def cyclic_square(a, coeffs) -> np.ndarray:
    """L(i, j) = a1*i + a2*j + a3 (mod a), residues in [a]."""
    a1, a2, a3 = (int(x) for x in coeffs)
    _check_coeffs(a, (a1, a2))
    idx = np.arange(1, a + 1)
    vals = a1 * idx[:, None] + a2 * idx[None, :] + a3
    return ((vals - 1) % a + 1).astype(DTYPE)


def cyclic_cube(a, coeffs) -> np.ndarray:
    """C(i, j, k) = a1*i + a2*j + a3*k + a4 (mod a), residues in [a]."""
    a1, a2, a3, a4 = (int(x) for x in coeffs)
    _check_coeffs(a, (a1, a2, a3))
    return affine_cube(a, (a1, a2, a3, a4))


def affine_cube(a, coeffs) -> np.ndarray:
    """The affine formula without the gcd precondition (may be non-latin)."""
    a1, a2, a3, a4 = (int(x) for x in coeffs)
    idx = np.arange(1, a + 1)
    vals = a1 * idx[:, None, None] + a2 * idx[None, :, None] + a3 * idx[None, None, :] + a4
    return ((vals - 1) % a + 1).astype(DTYPE)


def plain_cube(n, offset=0) -> np.ndarray:
    """The cube i + j + k - 2 (mod n), shifted onto symbols offset + [n]."""
    return affine_cube(n, (1, 1, 1, -2)) + offset


def verify_square(sq) -> bool:
    """Every row and column of a full square is a permutation of [n]."""
    arr = np.asarray(sq)
    n = arr.shape[0]
    if arr.shape != (n, n):
        raise DimensionMismatch(f"not a square: {arr.shape}")
    want = np.arange(1, n + 1)
    return bool((np.sort(arr, axis=0) == want[:, None]).all() and (np.sort(arr, axis=1) == want).all())


def is_partial_square(sq) -> bool:
    """No symbol repeats in a row or column; zeros are empty cells."""
    arr = np.asarray(sq)
    n = arr.shape[0]
    if arr.shape != (n, n):
        raise DimensionMismatch(f"not a square: {arr.shape}")
    for line in list(arr) + list(arr.T):
        filled = line[line != 0]
        if len(np.unique(filled)) != len(filled) or ((filled < 1) | (filled > n)).any():
            return False
    return True


def cube_from_square(square) -> np.ndarray:
    """C(r, c, l) = L(L(r, l), c)."""
    sq = np.asarray(square, dtype=np.int64)
    n = sq.shape[0]
    if sq.shape != (n, n):
        raise DimensionMismatch(f"not a square: {sq.shape}")
    inner = sq[:, None, :]  # L(r, l) broadcast over c
    cols = np.arange(n)[None, :, None]
    return sq[inner - 1, cols].astype(DTYPE)


def square_with_subsquare(n, m) -> np.ndarray:
    """Latin square of order n whose top-left m x m block is a square on [m].

    Needs m <= n/2 or m = n.  The first m rows are a cyclic square on [m]
    beside a cyclic rectangle on m+[n-m]; the remaining rows come from the
    Ryser/Hall extension in :mod:`cubeforge.completion`.
    """
    if m < 0 or m > n:
        raise ValueError(f"need 0 <= m <= n, got m={m}, n={n}")
    if 2 * m > n and m != n:
        raise SubsquareTooLarge(f"a subsquare of order {m} needs m <= {n}/2")
    if m == 0 or m == n:
        return cyclic_square(n, (1, 1, -1))
    from cubeforge.completion import extend_rectangle

    rect = np.zeros((m, n), dtype=DTYPE)
    rect[:, :m] = cyclic_square(m, (1, 1, -1))
    w = n - m
    i = np.arange(m)[:, None]
    j = np.arange(w)[None, :]
    rect[:, m:] = m + (i + j) % w + 1
    return extend_rectangle(rect, n, to_square=True)


def cube_with_subcube(total, c) -> np.ndarray:
    """Latin cube of order total = t + c whose cells [c]^3 hold only [c]."""
    t = total - c
    if c < 0 or t < 0:
        raise ValueError(f"bad sizes total={total}, c={c}")
    if t < c:
        raise SubcubeTooLarge(f"a subcube of order {c} needs t={t} >= c")
    return cube_from_square(square_with_subsquare(total, c))


def move_corner_subcube(cube, c) -> np.ndarray:
    """Relocate a subcube on [c]^3 with symbols [c] to the last c indices and symbols."""
    arr = as_cube(cube)
    n = arr.shape[0]
    # x in [c] goes to n-c+x, the rest slides down by c
    perm = [x + n - c if x <= c else x - c for x in range(1, n + 1)]
    return permute(arr, perm, perm, perm, perm)


def inflate(base, block) -> np.ndarray:
    """Replace every cell of ``base`` by a copy of ``block`` on its own symbol range.

    D(t(i-1)+u, t(j-1)+v, t(l-1)+w) = t(C(i,j,l)-1) + T(u,v,w).
    """
    c = as_cube(base).astype(np.int64)
    t_cube = as_cube(block).astype(np.int64)
    n, t = c.shape[0], t_cube.shape[0]
    big = t * (c[:, None, :, None, :, None] - 1) + t_cube[None, :, None, :, None, :]
    return big.reshape(n * t, n * t, n * t).astype(DTYPE)


def diagonal_realization(a, k) -> Realization:
    """LC(a^k): the cube i + j - l (mod k) has C(m,m,m) = m; inflate it by order a."""
    if a < 1 or k < 1:
        raise ValueError(f"need a, k >= 1, got a={a}, k={k}")
    base = affine_cube(k, (1, 1, -1, 0))
    cube = inflate(base, plain_cube(a))
    real = Realization((a,) * k, cube)
    rep = real.check()
    if not rep.valid:
        raise ConstructionFailed(str(rep))
    return real


def inflate_realization(real: Realization, t) -> Realization:
    """LC(h1..hk) inflated by the order-t cyclic cube gives LC(t*h1..t*hk)."""
    return Realization(tuple(t * h for h in real.partition), inflate(real.cube, plain_cube(t)))


__all__ = [
    "cyclic_square", "cyclic_cube", "affine_cube", "plain_cube", "verify_square", "is_partial_square",
    "cube_from_square", "square_with_subsquare", "cube_with_subcube",
    "move_corner_subcube", "inflate", "diagonal_realization", "inflate_realization",
]

