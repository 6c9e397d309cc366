"""Sparse polynomials over Z/2^c in x and y, with y reduced modulo y^q - 1."""

from __future__ import annotations

from collections.abc import Iterable, Mapping
from dataclasses import dataclass

from ..errors import ContextMismatchError, DegreeCapError


@dataclass(frozen=True)
class PolyContext:
    """Coefficient ring Z/2^bits, y-period q and an optional x-degree cap."""

    bits: int
    q: int = 1
    cap: int | None = None

    def __post_init__(self):
        if self.bits < 1:
            raise ValueError("bits must be positive")
        if self.q < 1:
            raise ValueError("q must be positive")

    @property
    def modulus(self) -> int:
        return 1 << self.bits


class BiPoly:
    """Element of Z/2^c[x, y]/(y^q - 1) stored as ``{(xdeg, ydeg): coeff}``.

    Zero coefficients are never stored and y-degrees live in ``[0, q)``.
    """

    __slots__ = ("ctx", "terms")

    def __init__(self, terms: Mapping[tuple[int, int], int] | Iterable = (), ctx: PolyContext = PolyContext(64)):
        self.ctx = ctx
        mod = ctx.modulus
        q = ctx.q
        out: dict[tuple[int, int], int] = {}
        items = terms.items() if isinstance(terms, Mapping) else terms
        for (i, j), c in items:
            if i < 0:
                raise ValueError("negative x-degree")
            key = (i, j % q)
            out[key] = (out.get(key, 0) + c) % mod
        self.terms = {k: c for k, c in out.items() if c}
        self._check_cap()

    @classmethod
    def _raw(cls, terms: dict, ctx: PolyContext) -> "BiPoly":
        obj = object.__new__(cls)
        obj.ctx = ctx
        obj.terms = terms
        obj._check_cap()
        return obj

    def _check_cap(self) -> None:
        cap = self.ctx.cap
        if cap is not None:
            for i, _ in self.terms:
                if i > cap:
                    raise DegreeCapError(f"x-degree {i} exceeds cap {cap}")

    # -- constructors ------------------------------------------------------
    @classmethod
    def zero(cls, ctx: PolyContext) -> "BiPoly":
        return cls._raw({}, ctx)

    @classmethod
    def one(cls, ctx: PolyContext) -> "BiPoly":
        return cls.monomial(1, 0, 0, ctx)

    @classmethod
    def monomial(cls, coeff: int, xdeg: int, ydeg: int, ctx: PolyContext) -> "BiPoly":
        return cls({(xdeg, ydeg): coeff}, ctx)

    # -- helpers -------------------------------------------------------------
    def _coerce(self, other) -> "BiPoly":
        if isinstance(other, BiPoly):
            if other.ctx != self.ctx:
                raise ContextMismatchError(f"{self.ctx} vs {other.ctx}")
            return other
        if isinstance(other, int):
            return type(self)({(0, 0): other}, self.ctx)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        mod = self.ctx.modulus
        out = dict(self.terms)
        for k, c in other.terms.items():
            v = (out.get(k, 0) + c) % mod
            if v:
                out[k] = v
            else:
                out.pop(k, None)
        return type(self)._raw(out, self.ctx)

    __radd__ = __add__

    def __neg__(self):
        mod = self.ctx.modulus
        return type(self)._raw({k: (mod - c) % mod for k, c in self.terms.items()}, self.ctx)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            return self.scale(other)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        mod = self.ctx.modulus
        q = self.ctx.q
        cap = self.ctx.cap
        out: dict[tuple[int, int], int] = {}
        for (i1, j1), c1 in self.terms.items():
            for (i2, j2), c2 in other.terms.items():
                i = i1 + i2
                if cap is not None and i > cap:
                    raise DegreeCapError(f"x-degree {i} exceeds cap {cap}")
                k = (i, (j1 + j2) % q)
                out[k] = (out.get(k, 0) + c1 * c2) % mod
        return type(self)._raw({k: c for k, c in out.items() if c}, self.ctx)

    __rmul__ = __mul__

    def scale(self, s: int) -> "BiPoly":
        mod = self.ctx.modulus
        out = {}
        for k, c in self.terms.items():
            v = (c * s) % mod
            if v:
                out[k] = v
        return type(self)._raw(out, self.ctx)

    def __eq__(self, other):
        if isinstance(other, int):
            other = type(self)({(0, 0): other}, self.ctx)
        if not isinstance(other, BiPoly):
            return NotImplemented
        return self.ctx == other.ctx and self.terms == other.terms

    def __hash__(self):
        return hash((self.ctx, frozenset(self.terms.items())))

    def __bool__(self):
        return bool(self.terms)

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for (i, j), c in sorted(self.terms.items()):
            mono = "".join(s for s in (f"x^{i}" if i else "", f"y^{j}" if j else ""))
            parts.append(f"{c}{'*' + mono if mono else ''}")
        return " + ".join(parts)

    # -- queries ---------------------------------------------------------------
    def coeff(self, xdeg: int, ydeg: int = 0) -> int:
        return self.terms.get((xdeg, ydeg % self.ctx.q), 0)

    def min_xdeg(self) -> int | None:
        return min((i for i, _ in self.terms), default=None)

    def max_xdeg(self) -> int | None:
        return max((i for i, _ in self.terms), default=None)

    def y_component(self, tau: int) -> "UniPoly":
        """The x-polynomial multiplying ``y^tau``."""
        if not 0 <= tau < self.ctx.q:
            raise ValueError(f"tau={tau} outside [0, {self.ctx.q})")
        ctx = PolyContext(self.ctx.bits, 1, self.ctx.cap)
        return UniPoly._raw({(i, 0): c for (i, j), c in self.terms.items() if j == tau}, ctx)

    def reduce_bits(self, bits: int) -> "BiPoly":
        """Image under Z/2^c -> Z/2^bits (bits <= c)."""
        if bits > self.ctx.bits:
            raise ValueError("can only reduce to fewer bits")
        ctx = PolyContext(bits, self.ctx.q, self.ctx.cap)
        return type(self)(self.terms, ctx)

    def signed(self) -> dict[tuple[int, int], int]:
        """Coefficients lifted to the symmetric range around zero."""
        mod = self.ctx.modulus
        return {k: (c - mod if c >= mod // 2 else c) for k, c in self.terms.items()}


class UniPoly(BiPoly):
    """BiPoly with q = 1, i.e. a polynomial in x only."""

    __slots__ = ()

    def __init__(self, terms=(), ctx: PolyContext = PolyContext(64)):
        if ctx.q != 1:
            raise ContextMismatchError("UniPoly requires q = 1")
        if isinstance(terms, Mapping):
            terms = {(k if isinstance(k, tuple) else (k, 0)): c for k, c in terms.items()}
        super().__init__(terms, ctx)

    @classmethod
    def from_coeffs(cls, coeffs: Mapping[int, int], bits: int, cap: int | None = None) -> "UniPoly":
        return cls({(i, 0): c for i, c in coeffs.items()}, PolyContext(bits, 1, cap))

    def coeffs(self) -> dict[int, int]:
        return {i: c for (i, _), c in sorted(self.terms.items())}

    def lowest_term(self) -> tuple[int, int] | None:
        """``(degree, coefficient)`` of the lowest nonzero monomial."""
        d = self.min_xdeg()
        return None if d is None else (d, self.terms[(d, 0)])
