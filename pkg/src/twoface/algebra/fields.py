"""GF(2^m) and the Galois ring Z/2^c[x]/(p(x)).

Polynomials over GF(2) are Python ints (bit i = coefficient of x^i).
"""

from __future__ import annotations

from functools import cached_property

import numpy as np


# -- GF(2)[x] helpers -------------------------------------------------------

def clmul(a: int, b: int) -> int:
    """Carry-less product of two GF(2)[x] polynomials."""
    r = 0
    while b:
        if b & 1:
            r ^= a
        a <<= 1
        b >>= 1
    return r


def gf2_mod(a: int, p: int) -> int:
    dp = p.bit_length()
    while a.bit_length() >= dp:
        a ^= p << (a.bit_length() - dp)
    return a


def gf2_mulmod(a: int, b: int, p: int) -> int:
    return gf2_mod(clmul(a, b), p)


def gf2_gcd(a: int, b: int) -> int:
    while b:
        a, b = b, gf2_mod(a, b)
    return a


def is_irreducible(p: int) -> bool:
    """Ben-Or test: gcd(p, x^(2^i) - x) = 1 for i <= deg/2."""
    m = p.bit_length() - 1
    if m < 1:
        return False
    if m == 1:
        return True
    if not p & 1:
        return False
    t = 2  # x
    for _ in range(m // 2):
        t = gf2_mulmod(t, t, p)
        if gf2_gcd(p, t ^ 2) != 1:
            return False
    return True


def find_irreducible(m: int) -> int:
    """Smallest (as an integer) irreducible polynomial of degree m over GF(2)."""
    if not 1 <= m <= 64:
        raise ValueError("degree must be in [1, 64]")
    if m == 1:
        return 0b11  # x + 1
    for low in range(1, 1 << m, 2):
        p = (1 << m) | low
        if is_irreducible(p):
            return p
    raise AssertionError("unreachable: irreducibles exist in every degree")


def poly_str(p: int) -> str:
    terms = []
    for i in range(p.bit_length() - 1, -1, -1):
        if p >> i & 1:
            terms.append("1" if i == 0 else ("x" if i == 1 else f"x^{i}"))
    return " + ".join(terms) or "0"


# -- GF(2^m) ------------------------------------------------------------------

class GF2m:
    """The field GF(2)[x]/(p). Elements are ints in ``[0, 2^m)``.

    For m <= 16 vectorised numpy operations use log/exp tables.
    """

    def __init__(self, m: int, poly: int | None = None):
        self.m = m
        self.poly = find_irreducible(m) if poly is None else poly
        if self.poly.bit_length() - 1 != m or not is_irreducible(self.poly):
            raise ValueError("modulus must be an irreducible polynomial of degree m")
        self.order = 1 << m

    def mul(self, a: int, b: int) -> int:
        return gf2_mulmod(a, b, self.poly)

    def pow(self, a: int, e: int) -> int:
        if a == 0:
            return 1 if e == 0 else 0
        e %= self.order - 1
        r = 1
        while e:
            if e & 1:
                r = self.mul(r, a)
            a = self.mul(a, a)
            e >>= 1
        return r

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("0 has no inverse")
        return self.pow(a, self.order - 2)

    def units(self) -> np.ndarray:
        return np.arange(1, self.order, dtype=np.int64)

    @cached_property
    def _tables(self):
        if self.m > 16:
            raise ValueError("vectorised tables only for m <= 16")
        n = self.order - 1
        g = next(g for g in range(2, self.order + 1) if self._is_generator(g)) if n > 1 else 1
        exp = np.zeros(2 * n, dtype=np.int64)
        log = np.zeros(self.order, dtype=np.int64)
        a = 1
        for i in range(n):
            exp[i] = a
            log[a] = i
            a = self.mul(a, g)
        exp[n:] = exp[:n]
        return exp, log

    def _is_generator(self, g: int) -> bool:
        n = self.order - 1
        fs = {f for f in range(2, n + 1) if n % f == 0 and all(f % d for d in range(2, int(f**0.5) + 1))}
        return all(self.pow(g, n // f) != 1 for f in fs)

    def vmul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        exp, log = self._tables
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        out = exp[log[a] + log[b]]
        return np.where((a == 0) | (b == 0), 0, out)

    def vpow(self, a: np.ndarray, e) -> np.ndarray:
        exp, log = self._tables
        n = self.order - 1
        a = np.asarray(a, dtype=np.int64)
        e = np.asarray(e, dtype=np.int64)
        out = exp[(log[a] * e) % n]
        return np.where(a == 0, np.where(e == 0, 1, 0), out)


# -- Galois ring -----------------------------------------------------------------

class GaloisRing:
    """Z/2^c[x]/(p(x)) with p irreducible mod 2; elements are arrays ``(..., m)``.

    Coordinate i is the coefficient of x^i. Small parameters use int64 arrays,
    larger ones fall back to Python-int object arrays.
    """

    def __init__(self, m: int, c: int, poly: int | None = None):
        self.field = GF2m(m, poly)
        self.m = m
        self.c = c
        self.mod = 1 << c
        self.dtype = np.int64 if (c <= 20 and m <= 16) else object
        # reduction table: x^s for s < 2m-1 in the basis 1..x^(m-1)
        p = self.field.poly
        red = np.zeros((2 * m - 1, m), dtype=object)
        for s in range(m):
            red[s, s] = 1
        for s in range(m, 2 * m - 1):
            # x^s = x * x^(s-1); x^m = -(p - x^m) over Z/2^c
            prev = red[s - 1]
            cur = np.zeros(m, dtype=object)
            cur[1:] = prev[:-1]
            top = prev[-1]
            for i in range(m):
                if p >> i & 1:
                    cur[i] = cur[i] - top
            red[s] = cur % self.mod
        self._red = red.astype(self.dtype)

    def zeros(self, shape=()) -> np.ndarray:
        return np.zeros((*shape, self.m), dtype=self.dtype)

    def scalar(self, v, shape=()) -> np.ndarray:
        out = self.zeros(shape)
        out[..., 0] = v % self.mod if not isinstance(v, np.ndarray) else v % self.mod
        return out

    def one(self, shape=()) -> np.ndarray:
        return self.scalar(1, shape)

    def lift(self, a) -> np.ndarray:
        """Coordinate-wise 0/1 lift of field elements (ints) into the ring."""
        a = np.asarray(a, dtype=np.int64)
        bits = (a[..., None] >> np.arange(self.m)) & 1
        return bits.astype(self.dtype)

    def reduce_to_field(self, x: np.ndarray) -> np.ndarray:
        bits = (np.asarray(x) % 2).astype(np.int64)
        return (bits << np.arange(self.m)).sum(axis=-1)

    def add(self, a, b):
        return (a + b) % self.mod

    def sub(self, a, b):
        return (a - b) % self.mod

    def mul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        a, b = np.broadcast_arrays(a, b)
        m = self.m
        conv = np.zeros((*a.shape[:-1], 2 * m - 1), dtype=self.dtype)
        for i in range(m):
            conv[..., i:i + m] += a[..., i:i + 1] * b
            conv %= self.mod
        return (conv @ self._red) % self.mod

    def smul(self, s: int, a: np.ndarray) -> np.ndarray:
        return (a * (s % self.mod)) % self.mod

    def pow(self, a: np.ndarray, e: int) -> np.ndarray:
        result = self.one(a.shape[:-1])
        base = a
        while e:
            if e & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            e >>= 1
        return result

    def teichmuller(self, a) -> np.ndarray:
        """Image of field elements in the cyclic unit subgroup of order 2^m - 1.

        Raising any lift to the power 2^(c-1) kills the 1 + 2R part of the unit
        group, so ``a -> lift(a)^(2^(c-1))`` is a bijection of F* onto that subgroup.
        """
        x = self.lift(a)
        for _ in range(self.c - 1):
            x = self.mul(x, x)
        return x

    def is_scalar(self, x: np.ndarray) -> np.ndarray:
        return np.all(np.asarray(x)[..., 1:] == 0, axis=-1)
