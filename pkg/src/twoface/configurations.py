"""Path configurations between terminals on two faces.

Terminals on face ``i`` carry labels ``0 .. k_i - 1`` increasing clockwise.
Unless stated otherwise, labels are taken in the *axis frame*: label 0 is the
first terminal clockwise after the point where the axis meets the face.

A configuration matches the 2k terminals in pairs. Pairs with both ends on
one face are *within* paths ``(alpha, beta)`` where the clockwise gap from
alpha to beta holds an even number of terminals; the other pairs are
*cross* paths. Only planar-realisable matchings are enumerated: within paths
never interlace, no unmatched (free) terminal sits inside a within path's
interval, and the cross part is a cyclic shift between the clockwise
sequences of free terminals.
"""

from __future__ import annotations

import itertools
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from functools import cached_property, lru_cache

OUTER, INNER = 1, 2

Pair = tuple[int, int]


def prec(a: int, b: int, k: int) -> bool:
    """True iff the clockwise open gap from a to b holds an even number of terminals."""
    if a == b:
        raise ValueError("prec needs two distinct terminals")
    return ((b - a - 1) % k) % 2 == 0


def precedes(u: tuple[int, int], v: tuple[int, int], k1: int, k2: int) -> bool:
    """:func:`prec` on ``(face, label)`` terminals."""
    if u[0] != v[0]:
        raise ValueError("terminals lie on different faces")
    return prec(u[1], v[1], k1 if u[0] == OUTER else k2)


def even_interval(a: int, b: int, k: int) -> tuple[int, ...]:
    """Labels a, a+1, ..., b walking clockwise (cyclically)."""
    return tuple((a + i) % k for i in range((b - a) % k + 1))


def in_interval(x: int, a: int, b: int, k: int) -> bool:
    return (x - a) % k <= (b - a) % k


@dataclass(frozen=True)
class PathConfiguration:
    k1: int
    k2: int
    within1: tuple[Pair, ...]
    within2: tuple[Pair, ...]
    cross: tuple[Pair, ...]

    def __post_init__(self):
        object.__setattr__(self, "within1", tuple(sorted(self.within1)))
        object.__setattr__(self, "within2", tuple(sorted(self.within2)))
        object.__setattr__(self, "cross", tuple(sorted(self.cross)))

    # -- derived structure ------------------------------------------------------
    @property
    def q(self) -> int:
        return len(self.cross)

    def size(self, face: int) -> int:
        return self.k1 if face == OUTER else self.k2

    def within(self, face: int) -> tuple[Pair, ...]:
        return self.within1 if face == OUTER else self.within2

    def free(self, face: int) -> tuple[int, ...]:
        idx = 0 if face == OUTER else 1
        return tuple(sorted(p[idx] for p in self.cross))

    def alphas(self, face: int) -> tuple[int, ...]:
        return tuple(sorted(a for a, _ in self.within(face)))

    @cached_property
    def shift(self) -> int:
        """r such that the t-th free terminal on f1 meets the (t+r)-th on f2."""
        f1, f2 = self.free(OUTER), self.free(INNER)
        q = len(f1)
        r = f2.index(dict(self.cross)[f1[0]])
        for t, a in enumerate(f1):
            if dict(self.cross)[a] != f2[(t + r) % q]:
                raise ValueError("cross part is not a cyclic shift")
        return r

    @property
    def key(self) -> tuple:
        return (self.q, self.alphas(OUTER), self.alphas(INNER), self.shift)

    def partner(self, face: int, label: int) -> tuple[int, int]:
        for a, b in self.within(face):
            if label == a:
                return face, b
            if label == b:
                return face, a
        idx = 0 if face == OUTER else 1
        for p in self.cross:
            if p[idx] == label:
                return (INNER, p[1]) if face == OUTER else (OUTER, p[0])
        raise KeyError((face, label))

    def matching(self) -> frozenset:
        """Frame-specific set of unordered ``(face, label)`` pairs."""
        out = set()
        for face in (OUTER, INNER):
            for a, b in self.within(face):
                out.add(frozenset({(face, a), (face, b)}))
        for a, b in self.cross:
            out.add(frozenset({(OUTER, a), (INNER, b)}))
        return frozenset(out)

    def rotated(self, s1: int, s2: int) -> "PathConfiguration":
        """Same matching with labels renumbered so old label s_i becomes 0."""
        k1, k2 = self.k1, self.k2

        def fix(pairs, k, s):
            return [((a - s) % k, (b - s) % k) for a, b in pairs]

        return PathConfiguration(
            k1, k2,
            fix(self.within1, k1, s1),
            fix(self.within2, k2, s2),
            [((a - s1) % k1, (b - s2) % k2) for a, b in self.cross],
        )

    def canonical_offsets(self) -> tuple[int, int]:
        """Offsets that make the smallest free label on each face become 0."""
        return self.free(OUTER)[0], self.free(INNER)[0]

    def validate(self) -> None:
        for face in (OUTER, INNER):
            k = self.size(face)
            labels = [x for p in self.within(face) for x in p] + list(self.free(face))
            if sorted(labels) != list(range(k)):
                raise ValueError("not a perfect matching")
            for a, b in self.within(face):
                if not prec(a, b, k):
                    raise ValueError(f"pair ({a}, {b}) is not ordered alpha before beta")
                for x in self.free(face):
                    if in_interval(x, a, b, k):
                        raise ValueError("free terminal inside an even interval")
            for (a, b), (c, d) in itertools.combinations(self.within(face), 2):
                if in_interval(c, a, b, k) != in_interval(d, a, b, k):
                    raise ValueError("within paths interlace")
        if self.q < 1 or self.q % 2 != self.k1 % 2 or self.q % 2 != self.k2 % 2:
            raise ValueError("cross count has the wrong parity")
        _ = self.shift

    def describe(self) -> str:
        parts = [f"o{a}-o{b}" for a, b in self.within1]
        parts += [f"i{a}-i{b}" for a, b in self.within2]
        parts += [f"o{a}-i{b}" for a, b in self.cross]
        return " ".join(parts)

    def as_dict(self) -> dict:
        return {
            "within_outer": [list(p) for p in self.within1],
            "within_inner": [list(p) for p in self.within2],
            "cross": [list(p) for p in self.cross],
            "q": self.q,
            "shift": self.shift,
        }


# -- enumeration -------------------------------------------------------------

def _noncrossing(seq: Sequence[int]) -> Iterable[tuple[Pair, ...]]:
    """Non-crossing perfect matchings of a linear sequence (pairs in order)."""
    if not seq:
        yield ()
        return
    first = seq[0]
    for j in range(1, len(seq), 2):
        for inner in _noncrossing(seq[1:j]):
            for rest in _noncrossing(seq[j + 1:]):
                yield ((first, seq[j]),) + inner + rest


@lru_cache(maxsize=None)
def face_patterns(k: int, q: int) -> tuple[tuple[tuple[int, ...], tuple[Pair, ...]], ...]:
    """All (free labels, within pairs) on one face with q free terminals."""
    if q < 1 or q > k or (k - q) % 2:
        return ()
    out = []
    for free in itertools.combinations(range(k), q):
        gaps = []
        ok = True
        for t in range(q):
            a, b = free[t], free[(t + 1) % q]
            gap = [(a + 1 + i) % k for i in range((b - a - 1) % k)] if q > 1 else [
                (a + 1 + i) % k for i in range(k - 1)
            ]
            if len(gap) % 2:
                ok = False
                break
            gaps.append(gap)
        if not ok:
            continue
        for parts in itertools.product(*(list(_noncrossing(g)) for g in gaps)):
            out.append((free, tuple(sorted(p for part in parts for p in part))))
    return tuple(out)


@lru_cache(maxsize=None)
def enumerate_configs(k1: int, k2: int) -> tuple[PathConfiguration, ...]:
    """All realisable configurations, ordered by (q, alpha sets, shift)."""
    if k1 % 2 == 0 or k2 % 2 == 0:
        raise ValueError("both faces need an odd number of terminals")
    out = []
    for q in range(1, min(k1, k2) + 1, 2):
        for free1, w1 in face_patterns(k1, q):
            for free2, w2 in face_patterns(k2, q):
                for r in range(q):
                    cross = [(free1[t], free2[(t + r) % q]) for t in range(q)]
                    out.append(PathConfiguration(k1, k2, w1, w2, cross))
    out.sort(key=lambda P: P.key)
    return tuple(out)


RowIndex = tuple[int, tuple[int, ...], tuple[int, ...], int]


@lru_cache(maxsize=None)
def enumerate_rows(k1: int, k2: int) -> tuple[RowIndex, ...]:
    """Row indices ``(q, J1, J2, tau)`` with |J_i| = (k_i - q)/2."""
    rows = []
    for q in range(1, min(k1, k2) + 1, 2):
        l1, l2 = (k1 - q) // 2, (k2 - q) // 2
        for J1 in itertools.combinations(range(k1), l1):
            for J2 in itertools.combinations(range(k2), l2):
                for tau in range(q):
                    rows.append((q, J1, J2, tau))
    return tuple(rows)


# -- roles and axis crossing -----------------------------------------------------

def compatible(P: PathConfiguration, J1: Iterable[int], J2: Iterable[int]) -> bool:
    """Every pair of P joins a source to a sink.

    J1 are the sinks on the outer face, J2 the sources on the inner face.
    """
    J1, J2 = set(J1), set(J2)
    for a, b in P.within1:
        if (a in J1) == (b in J1):
            return False
    for a, b in P.within2:
        if (a in J2) == (b in J2):
            return False
    return all((a in J1) == (b in J2) for a, b in P.cross)


def axis_crossing_int(P: PathConfiguration, J1: Iterable[int], J2: Iterable[int]) -> int:
    """Net clockwise axis crossings of the canonical routing of P (as an integer).

    A within path whose interval wraps past label 0 crosses once, positively
    when it is traversed from alpha to beta. The t-th cross path (free
    terminals counted from the axis) ends at the (t + r)-th free terminal of
    the other face and crosses floor((t + r) / q) times, positively when it
    runs from the outer face to the inner one.
    """
    J1, J2 = set(J1), set(J2)
    total = 0
    for a, b in P.within1:
        if b < a:
            total += 1 if a not in J1 else -1  # source on alpha
    for a, b in P.within2:
        if b < a:
            total += 1 if a in J2 else -1
    q = P.q
    r = P.shift
    for t, a in enumerate(P.free(OUTER)):
        wraps = (t + r) // q
        total += wraps if a not in J1 else -wraps
    return total


def axis_crossing(P: PathConfiguration, J1=None, J2=None, modulus: int | None = None) -> int:
    """Axis crossing of P modulo ``modulus`` (default: P's own cross count).

    Roles default to the alpha sets, under which every cross path runs
    from the outer to the inner face.
    """
    if J1 is None:
        J1 = P.alphas(OUTER)
    if J2 is None:
        J2 = P.alphas(INNER)
    return axis_crossing_int(P, J1, J2) % (modulus or P.q)


def frame_shift(J1: Iterable[int], J2: Iterable[int], s1: int, s2: int) -> int:
    """Change of every axis crossing when the axis moves clockwise past labels < s_i.

    Passing a source adds one and passing a sink subtracts one.
    """
    J1, J2 = set(J1), set(J2)
    c = sum(-1 if z in J1 else 1 for z in range(s1))
    c += sum(1 if z in J2 else -1 for z in range(s2))
    return c


def config_row(P: PathConfiguration) -> RowIndex:
    """Image of P under the map onto row indices used by the squareness check."""
    J1, J2 = P.alphas(OUTER), P.alphas(INNER)
    return (P.q, J1, J2, axis_crossing(P, J1, J2))


# -- pivots ------------------------------------------------------------------------

@dataclass(frozen=True)
class PivotData:
    A1: tuple[int, ...]
    N1: tuple[int, ...]
    A2: tuple[int, ...]
    N2: tuple[int, ...]

    @property
    def expanded1(self) -> tuple[int, ...]:
        return tuple(a for a, n in zip(self.A1, self.N1) for _ in range(n))

    @property
    def expanded2(self) -> tuple[int, ...]:
        return tuple(a for a, n in zip(self.A2, self.N2) for _ in range(n))

    def pivots(self, face: int) -> tuple[int, ...]:
        return self.A1 if face == OUTER else self.A2

    def multiplicity(self, face: int) -> dict[int, int]:
        A, N = (self.A1, self.N1) if face == OUTER else (self.A2, self.N2)
        return dict(zip(A, N))


def _face_pivots(pairs: Sequence[Pair], k: int) -> tuple[tuple[int, ...], tuple[int, ...]]:
    alphas = {a for a, _ in pairs}
    A, N = [], []
    for a, b in sorted(pairs, key=lambda p: p[1]):
        if (a + 1) % k == b:
            n = 0
            while (b - 1 - n) % k in alphas and n < k:
                n += 1
            A.append(b)
            N.append(n)
    return tuple(A), tuple(N)


def phi(P: PathConfiguration) -> PivotData:
    """Pivots (betas right after their alpha) with run-length multiplicities.

    Labels are those of the frame P is expressed in; order is increasing label.
    """
    A1, N1 = _face_pivots(P.within1, P.k1)
    A2, N2 = _face_pivots(P.within2, P.k2)
    return PivotData(A1, N1, A2, N2)


def rightmost_pivots(P: PathConfiguration) -> tuple[frozenset, frozenset]:
    """Pivots that are the clockwise-last pivot in every interval enclosing them."""
    data = phi(P)
    out = []
    for face in (OUTER, INNER):
        k = P.size(face)
        pivots = data.pivots(face)
        keep = set()
        for x in pivots:
            ok = True
            for a, b in P.within(face):
                if in_interval(x, a, b, k):
                    last = max((p for p in pivots if in_interval(p, a, b, k)), key=lambda p: (p - a) % k)
                    if last != x:
                        ok = False
                        break
            if ok:
                keep.add(x)
        out.append(frozenset(keep))
    return out[0], out[1]


def delta(J: Sequence[int], expanded: Sequence[int]) -> tuple[tuple[int, ...], int]:
    """Bits delta(j_r) = [j_r < A_r] for sorted J against the expanded pivots."""
    if len(J) != len(expanded):
        raise ValueError("J and the expanded pivot sequence differ in length")
    bits = tuple(int(j < a) for j, a in zip(sorted(J), expanded))
    return bits, sum(bits)


def sigma_tau(I1, I2, J1, J2, pivots: PivotData, q: int) -> tuple[int, int]:
    """Sign exponent (mod 2) and y-offset (mod q) attached to one summation term."""
    if len(I1) != len(J1) or len(I2) != len(J2):
        raise ValueError("I and J arities differ")
    _, d1 = delta(J1, pivots.expanded1)
    _, d2 = delta(J2, pivots.expanded2)
    tau = (2 * sum(I1) + 2 * d1 - 2 * sum(I2) - 2 * d2) % q
    sigma = (sum(I1) + sum(I2) + sum(J1) + sum(J2) + d1 + d2) % 2
    return sigma, tau


# -- good and bad paths ----------------------------------------------------------

def _role_path(C: PathConfiguration, face: int, j: int) -> Pair | None:
    for a, b in C.within(face):
        if j in (a, b):
            return a, b
    return None


def is_bad(path: Pair, face_size: int, pivot: int) -> bool:
    """A within path is bad iff its even interval misses the pivot pair (pivot-1, pivot)."""
    a, b = path
    k = face_size
    return not (in_interval((pivot - 1) % k, a, b, k) and in_interval(pivot, a, b, k))


def bad_paths(C: PathConfiguration, J1, J2, pivots: PivotData) -> list[tuple[int, int]]:
    """``(face, r)`` for every role index whose within path in C is bad.

    C, the roles and the pivots must all be expressed in the same frame.
    """
    out = []
    for face, J, exp in ((OUTER, J1, pivots.expanded1), (INNER, J2, pivots.expanded2)):
        for r, (j, a) in enumerate(zip(sorted(J), exp)):
            p = _role_path(C, face, j)
            if p is not None and is_bad(p, C.size(face), a):
                out.append((face, r))
    return out


def classify_config(C: PathConfiguration, P: PathConfiguration, J1, J2) -> str:
    """'good' or 'bad' relative to P, in P's canonical frame.

    ``J1``, ``J2`` and C are given in the axis frame.
    """
    s1, s2 = P.canonical_offsets()
    Pr = P.rotated(s1, s2)
    Cr = C.rotated(s1, s2)
    J1r = sorted((j - s1) % P.k1 for j in J1)
    J2r = sorted((j - s2) % P.k2 for j in J2)
    return "bad" if bad_paths(Cr, J1r, J2r, phi(Pr)) else "good"


def f1f2_equivalent(P: PathConfiguration, C: PathConfiguration) -> bool:
    return P.within1 == C.within1 and P.within2 == C.within2
