"""Small finite fields GF(p^e) as lookup tables.

An element is encoded as the integer whose base-p digits are its
coefficients over the prime field (lowest degree first).
"""

from __future__ import annotations

from functools import lru_cache
from itertools import product

import numpy as np

from cubeforge.errors import NotPrimePower


def factorize(n) -> dict[int, int]:
    out: dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def prime_power(q) -> tuple[int, int]:
    """Return (p, e) with q = p**e, or raise NotPrimePower."""
    if q < 2:
        raise NotPrimePower(f"{q} is not a prime power")
    f = factorize(q)
    if len(f) != 1:
        raise NotPrimePower(f"{q} is not a prime power")
    (p, e), = f.items()
    return p, e


def _poly_mod(a, m, p):
    """Remainder of a modulo monic m over GF(p); coefficient lists, low degree first."""
    a = [x % p for x in a]
    while len(a) >= len(m):
        lead = a[-1]
        if lead:
            shift = len(a) - len(m)
            for idx, coeff in enumerate(m):
                a[shift + idx] = (a[shift + idx] - lead * coeff) % p
        a.pop()
    return a


def _is_irreducible(m, p):
    e = len(m) - 1
    for d in range(1, e // 2 + 1):
        for tail in product(range(p), repeat=d):
            factor = list(tail) + [1]
            if not any(_poly_mod(m, factor, p)):
                return False
    return True


@lru_cache(maxsize=None)
def irreducible_polynomial(p, e) -> tuple[int, ...]:
    """First monic irreducible polynomial of degree e in lexicographic search."""
    if e == 1:
        return (0, 1)
    for tail in product(range(p), repeat=e):
        m = list(reversed(tail)) + [1]
        if m[0] == 0:
            continue
        if _is_irreducible(m, p):
            return tuple(m)
    raise AssertionError(f"no irreducible polynomial of degree {e} over GF({p})")


class GaloisField:
    """Addition and multiplication tables of GF(q)."""

    def __init__(self, q):
        self.q = q
        self.p, self.e = prime_power(q)
        self.modulus = irreducible_polynomial(self.p, self.e)
        p, e = self.p, self.e
        digits = np.array([[(x // p ** d) % p for d in range(e)] for x in range(q)], dtype=np.int64)
        weights = p ** np.arange(e)
        self.add = (((digits[:, None, :] + digits[None, :, :]) % p) @ weights).astype(np.int64)
        self.neg = ((-digits % p) @ weights).astype(np.int64)
        mul = np.zeros((q, q), dtype=np.int64)
        for x in range(q):
            for y in range(x, q):
                prod = [0] * (2 * e - 1)
                for i, a in enumerate(digits[x]):
                    if a:
                        for j, b in enumerate(digits[y]):
                            prod[i + j] += int(a) * int(b)
                red = _poly_mod(prod, self.modulus, p) if e > 1 else [prod[0]]
                val = sum((int(c) % p) * p ** d for d, c in enumerate(red))
                mul[x, y] = mul[y, x] = val
        self.mul = mul

    def __repr__(self):
        return f"GaloisField({self.q})"


@lru_cache(maxsize=None)
def galois_field(q) -> GaloisField:
    return GaloisField(q)
