"""Permanents of matrices with polynomial entries over Z/2^c[x, y]/(y^q - 1).

Three evaluators are provided:

* :func:`naive_perm`: sum over all permutations, a test oracle for n <= 8;
* :func:`ryser_perm`: Ryser's inclusion-exclusion formula in Gray-code order;
* :func:`sparse_perm`: a row-by-row dynamic program over sets of used columns,
  which is what the solver uses. On sparse, banded matrices (adjacency
  matrices of planar graphs after a bandwidth-reducing ordering) the number of
  live column sets stays small, and x-degrees above a bound can be dropped
  since truncation commutes with ring operations.
"""

from __future__ import annotations

import itertools
from collections.abc import Sequence
from concurrent.futures import ProcessPoolExecutor

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import reverse_cuthill_mckee

from .algebra.poly import BiPoly, PolyContext, UniPoly

NAIVE_MAX = 8


class PolyMatrix:
    """Square matrix of :class:`BiPoly` entries sharing one context."""

    __slots__ = ("n", "ctx", "entries")

    def __init__(self, entries: Sequence[Sequence[BiPoly]], ctx: PolyContext | None = None):
        rows = [list(r) for r in entries]
        n = len(rows)
        if n == 0:
            raise ValueError("permanent of a 0x0 matrix is not supported")
        if any(len(r) != n for r in rows):
            raise ValueError("matrix must be square")
        ctx = ctx or rows[0][0].ctx
        for r in rows:
            for a in r:
                if a.ctx != ctx:
                    raise ValueError("all entries must share one polynomial context")
        self.n = n
        self.ctx = ctx
        self.entries = rows

    @classmethod
    def from_monomials(cls, n: int, arcs, ctx: PolyContext) -> "PolyMatrix":
        """Build from ``(i, j, xdeg, ydeg)`` tuples; repeated positions add up."""
        acc = [[{} for _ in range(n)] for _ in range(n)]
        for i, j, xd, yd in arcs:
            key = (xd, yd % ctx.q)
            acc[i][j][key] = acc[i][j].get(key, 0) + 1
        return cls([[BiPoly(acc[i][j], ctx) for j in range(n)] for i in range(n)], ctx)

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def permuted(self, rows: Sequence[int], cols: Sequence[int]) -> "PolyMatrix":
        return PolyMatrix([[self.entries[r][c] for c in cols] for r in rows], self.ctx)

    def pattern(self) -> np.ndarray:
        return np.array([[bool(a) for a in r] for r in self.entries])


def naive_perm(M: PolyMatrix) -> BiPoly:
    if M.n > NAIVE_MAX:
        raise ValueError(f"naive permanent limited to n <= {NAIVE_MAX}")
    total = BiPoly.zero(M.ctx)
    for perm in itertools.permutations(range(M.n)):
        prod = BiPoly.one(M.ctx)
        for i, j in enumerate(perm):
            a = M.entries[i][j]
            if not a:
                break
            prod = prod * a
        else:
            total = total + prod
    return total


def _gray(i: int) -> int:
    return i ^ (i >> 1)


def _ryser_chunk(args) -> BiPoly:
    entries, ctx, lo, hi = args
    n = len(entries)
    zero = BiPoly.zero(ctx)
    S = _gray(lo)
    sums = []
    for i in range(n):
        s = zero
        for j in range(n):
            if S >> j & 1:
                s = s + entries[i][j]
        sums.append(s)
    total = zero
    for g in range(lo, hi):
        if g > lo:
            # Gray step g-1 -> g flips the lowest set bit position of g
            j = (g & -g).bit_length() - 1
            adding = not (S >> j & 1)
            S ^= 1 << j
            for i in range(n):
                a = entries[i][j]
                if a:
                    sums[i] = sums[i] + a if adding else sums[i] - a
        if S == 0:
            continue
        prod = sums[0]
        for i in range(1, n):
            if not prod:
                break
            prod = prod * sums[i]
        if prod:
            total = total - prod if bin(S).count("1") % 2 else total + prod
    return total


def ryser_perm(M: PolyMatrix, jobs: int = 1) -> BiPoly:
    """Ryser's formula ``(-1)^n sum_S (-1)^|S| prod_i sum_{j in S} a_ij``.

    With ``jobs > 1`` the Gray-code sequence is split into contiguous chunks
    evaluated in worker processes; partial sums are added in chunk order.
    """
    n = M.n
    total_steps = 1 << n
    if jobs <= 1 or n < 10:
        chunks = [(M.entries, M.ctx, 0, total_steps)]
        parts = [_ryser_chunk(chunks[0])]
    else:
        bounds = np.linspace(0, total_steps, jobs + 1).astype(int)
        chunks = [(M.entries, M.ctx, int(a), int(b)) for a, b in zip(bounds[:-1], bounds[1:]) if b > a]
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            parts = list(pool.map(_ryser_chunk, chunks))
    total = BiPoly.zero(M.ctx)
    for p in parts:
        total = total + p
    return -total if n % 2 else total


def perm_y_coeff(M: PolyMatrix, tau: int) -> UniPoly:
    """Coefficient of ``y^tau`` in the permanent of M."""
    if not 0 <= tau < M.ctx.q:
        raise ValueError(f"tau={tau} outside [0, {M.ctx.q})")
    return sparse_perm(M).y_component(tau)


# -- dynamic program ---------------------------------------------------------------

def bandwidth_order(n: int, pairs) -> list[int]:
    """Reverse Cuthill-McKee order of the symmetrised nonzero pattern."""
    if n == 0:
        return []
    rows, cols = [], []
    for i, j in pairs:
        rows += [i, j]
        cols += [j, i]
    A = csr_matrix((np.ones(len(rows)), (rows, cols)), shape=(n, n))
    return [int(v) for v in reverse_cuthill_mckee(A, symmetric_mode=True)]


def sparse_perm(
    M: PolyMatrix | None = None,
    *,
    n: int | None = None,
    rows: Sequence[Sequence[tuple[int, Sequence[tuple[int, int, int]]]]] | None = None,
    ctx: PolyContext | None = None,
    truncate: int | None = None,
    order: Sequence[int] | None = None,
) -> BiPoly:
    """Permanent by dynamic programming over used-column sets.

    Either pass a :class:`PolyMatrix`, or ``n``, ``ctx`` and sparse ``rows``
    where ``rows[i]`` lists ``(j, [(xdeg, ydeg, coeff), ...])``. Terms of
    x-degree above ``truncate`` are discarded. ``order`` is a vertex order
    applied to rows and columns alike; by default a bandwidth-reducing order.
    """
    if M is not None:
        n, ctx = M.n, M.ctx
        rows = [
            [(j, [(xd, yd, c) for (xd, yd), c in a.terms.items()]) for j, a in enumerate(r) if a]
            for r in M.entries
        ]
    assert n is not None and rows is not None and ctx is not None
    q = ctx.q
    mask = ctx.modulus - 1
    D = truncate if truncate is not None else (1 << 62)

    if order is None:
        order = bandwidth_order(n, [(i, j) for i in range(n) for j, _ in rows[i]])
    pos = {v: k for k, v in enumerate(order)}
    prow = [[(pos[j], terms) for j, terms in rows[v]] for v in order]

    last = [-1] * n
    for i, r in enumerate(prow):
        for j, _ in r:
            last[j] = max(last[j], i)
    if min(last) < 0:
        return BiPoly.zero(ctx)
    required = []
    acc = 0
    by_row = [[] for _ in range(n)]
    for j, i in enumerate(last):
        by_row[i].append(j)
    for i in range(n):
        for j in by_row[i]:
            acc |= 1 << j
        required.append(acc)

    # state polynomial: list indexed by y-degree of {xdeg: coeff}
    states: dict[int, list[dict[int, int]]] = {0: [{0: 1}] + [{} for _ in range(q - 1)]}
    for i in range(n):
        req = required[i]
        new: dict[int, list[dict[int, int]]] = {}
        for S, poly in states.items():
            for j, terms in prow[i]:
                bit = 1 << j
                if S & bit:
                    continue
                T = S | bit
                if T & req != req:
                    continue
                tgt = new.get(T)
                if tgt is None:
                    tgt = new[T] = [{} for _ in range(q)]
                for w, e, c in terms:
                    for y, bucket in enumerate(poly):
                        if not bucket:
                            continue
                        out = tgt[(y + e) % q]
                        for x, v in bucket.items():
                            xx = x + w
                            if xx <= D:
                                out[xx] = (out.get(xx, 0) + v * c) & mask
        states = new
        if not states:
            return BiPoly.zero(ctx)
    final = states.get((1 << n) - 1)
    if final is None:
        return BiPoly.zero(ctx)
    return BiPoly._raw(
        {(x, y): v for y, bucket in enumerate(final) for x, v in bucket.items() if v}, ctx
    )
